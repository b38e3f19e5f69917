//! Nested-loop reimplementations of the engine's procedures over plain
//! vectors. They share no code with the engine and exist only to be compared
//! against it.

pub type Rows = Vec<Vec<f64>>;

/// `out[i] = Σ_c w[c] · rows[i][c]`.
pub fn weighted_sums(rows: &Rows, w: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for row in rows {
        let mut s = 0.0;
        for c in 0..w.len() {
            s += w[c] * row[c];
        }
        out.push(s);
    }
    out
}

pub fn shares(v: &[f64]) -> Vec<f64> {
    let mut total = 0.0;
    for x in v {
        total += x;
    }
    let mut out = Vec::new();
    for x in v {
        out.push(if total > 0.0 { x / total } else { 0.0 });
    }
    out
}

/// `PR[i][j] = Σ_c avsp[i][c] · rp[j][c]`.
pub fn assessment(rp: &Rows, avsp: &Rows) -> Rows {
    let m = rp.len();
    let mut pr = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            for c in 0..rp[j].len() {
                pr[i][j] += avsp[i][c] * rp[j][c];
            }
        }
    }
    pr
}

pub fn normalize_rows(a: &Rows) -> Rows {
    let mut out = Vec::new();
    for row in a {
        out.push(shares(row));
    }
    out
}

pub fn column_means(a: &Rows) -> Vec<f64> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut out = vec![0.0; n];
    for row in a {
        for j in 0..n {
            out[j] += row[j];
        }
    }
    for v in &mut out {
        *v /= m as f64;
    }
    out
}

/// `out[j] = Σ_i w[i] · a[i][j]`.
pub fn mix(w: &[f64], a: &Rows) -> Vec<f64> {
    let n = a[0].len();
    let mut out = vec![0.0; n];
    for i in 0..a.len() {
        for j in 0..n {
            out[j] += w[i] * a[i][j];
        }
    }
    out
}

/// Indices ordered by descending score. Neighbours within `tol` form one
/// tie group, ordered by `key`.
pub fn order(scores: &[f64], key: &[String], tol: f64) -> Vec<usize> {
    let mut left: Vec<usize> = (0..scores.len()).collect();
    let mut out = Vec::new();
    while !left.is_empty() {
        let mut best = 0;
        for k in 1..left.len() {
            let (a, b) = (left[k], left[best]);
            if scores[a] > scores[b] || (scores[a] == scores[b] && key[a] < key[b]) {
                best = k;
            }
        }
        out.push(left.remove(best));
    }
    let mut start = 0;
    while start < out.len() {
        let mut end = start + 1;
        while end < out.len() && (scores[out[end - 1]] - scores[out[end]]).abs() <= tol {
            end += 1;
        }
        for i in start + 1..end {
            let mut j = i;
            while j > start && key[out[j]] < key[out[j - 1]] {
                out.swap(j, j - 1);
                j -= 1;
            }
        }
        start = end;
    }
    out
}

/// Sort keys for a tie rule: the ids themselves, or zero-padded positions.
pub fn keys(ids: &[String], by_id: bool) -> Vec<String> {
    let mut out = Vec::new();
    for (i, id) in ids.iter().enumerate() {
        out.push(if by_id { id.clone() } else { format!("{i:08}") });
    }
    out
}

pub fn positional(m: usize) -> Vec<f64> {
    let total = (m * (m + 1)) as f64 / 2.0;
    let mut out = Vec::new();
    for p in 0..m {
        out.push((m - p) as f64 / total);
    }
    out
}

pub fn league_sizes(m: usize, count: usize) -> Vec<usize> {
    let mut sizes = vec![0; count];
    let mut k = 0;
    for _ in 0..m {
        sizes[k % count] += 1;
        k += 1;
    }
    sizes
}

/// Each league re-ranked by its first member's weights; equal shares keep
/// their incoming order.
pub fn rerank(order_in: &[usize], sizes: &[usize], rp: &Rows, avsp: &Rows, tol: f64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut start = 0;
    for &size in sizes {
        let members = &order_in[start..start + size];
        let leader = members[0];
        let mut raw = Vec::new();
        for &i in members {
            let mut s = 0.0;
            for c in 0..rp[i].len() {
                s += avsp[leader][c] * rp[i][c];
            }
            raw.push(s);
        }
        let sh = shares(&raw);
        let local = order(&sh, &keys(&vec![String::new(); size], false), tol);
        for k in local {
            out.push(members[k]);
        }
        start += size;
    }
    out
}

pub fn lift(order_in: &[usize], sizes: &[usize], k: usize) -> Vec<usize> {
    let mut out = order_in.to_vec();
    let mut boundary = 0;
    for &size in &sizes[..sizes.len() - 1] {
        boundary += size;
        for t in 0..k {
            out.swap(boundary - k + t, boundary + t);
        }
    }
    out
}

pub fn place_diff(a: &[usize], b: &[usize]) -> u64 {
    let mut total = 0;
    for (p, x) in a.iter().enumerate() {
        for (q, y) in b.iter().enumerate() {
            if x == y {
                total += p.abs_diff(q) as u64;
            }
        }
    }
    total
}

pub fn score_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]).abs();
    }
    s / 2.0
}

pub struct DichotomySpec {
    /// Administrative at odd levels when true, democratic otherwise.
    pub odd_admin: bool,
    /// Administrative at even levels when true.
    pub even_admin: bool,
    pub golden: bool,
    pub swap: usize,
}

/// Ordered result and first-level WINNERS. `key` holds ids for ordering
/// ties by id; `None` keeps each subgroup's incoming order.
pub fn dichotomy(
    admin: &[f64],
    pr: &Rows,
    key: Option<&[String]>,
    tol: f64,
    spec: &DichotomySpec,
) -> (Vec<usize>, Vec<usize>) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        members: Vec<usize>,
        level: usize,
        admin: &[f64],
        pr: &Rows,
        key: Option<&[String]>,
        tol: f64,
        spec: &DichotomySpec,
        out: &mut Vec<usize>,
        first: &mut Vec<usize>,
    ) {
        let n = members.len();
        if n <= 1 {
            out.extend(members);
            return;
        }
        let use_admin = if level % 2 == 1 { spec.odd_admin } else { spec.even_admin };
        let mut scores = Vec::new();
        if use_admin {
            for &i in &members {
                scores.push(admin[i]);
            }
        } else {
            let mut sub = Vec::new();
            for &i in &members {
                let mut row = Vec::new();
                for &j in &members {
                    row.push(pr[i][j]);
                }
                sub.push(row);
            }
            scores = column_means(&normalize_rows(&sub));
        }
        let mut sub_keys = Vec::new();
        for (k, &i) in members.iter().enumerate() {
            sub_keys.push(match key {
                Some(ids) => ids[i].clone(),
                None => format!("{k:08}"),
            });
        }
        let mut ranked = Vec::new();
        for k in order(&scores, &sub_keys, tol) {
            ranked.push(members[k]);
        }
        let w = if spec.golden {
            let mut w = (0.618 * n as f64).round() as usize;
            if w < 1 {
                w = 1;
            }
            if w > n - 1 {
                w = n - 1;
            }
            w
        } else {
            n - n / 2
        };
        let l = n - w;
        let mut s = spec.swap;
        if s > w - 1 {
            s = w - 1;
        }
        if l == 0 {
            s = 0;
        } else if s > l - 1 {
            s = l - 1;
        }
        for t in 0..s {
            ranked.swap(w - s + t, w + t);
        }
        if level == 1 {
            first.extend_from_slice(&ranked[..w]);
        }
        go(ranked[..w].to_vec(), level + 1, admin, pr, key, tol, spec, out, first);
        go(ranked[w..].to_vec(), level + 1, admin, pr, key, tol, spec, out, first);
    }
    let mut out = Vec::new();
    let mut first = Vec::new();
    let all: Vec<usize> = (0..admin.len()).collect();
    if all.len() == 1 {
        first = all.clone();
    }
    go(all, 1, admin, pr, key, tol, spec, &mut out, &mut first);
    (out, first)
}

/// Row-normalized `(Σ_c Rp_ic·AVSp_ic·Rp_jc) / (Σ_c Bp_ic·RVSp_ic·Bp_jc)`.
pub fn work_passion(rp: &Rows, avsp: &Rows, bp: &Rows, rvsp: &Rows) -> Rows {
    let m = rp.len();
    let mut out = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            let mut num = 0.0;
            for c in 0..rp[i].len() {
                num += rp[i][c] * avsp[i][c] * rp[j][c];
            }
            let mut den = 0.0;
            for c in 0..bp[i].len() {
                den += bp[i][c] * rvsp[i][c] * bp[j][c];
            }
            out[i][j] = num / den;
        }
    }
    normalize_rows(&out)
}
