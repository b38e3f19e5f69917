//! File formats, bundle loading, report emission and weight reconstruction.

mod bundle;
pub mod format;
pub mod nnls;
mod reconstruct;
mod report;
mod table;

pub use bundle::{load_scenario, save_scenario, BundleFiles, InlineBundle, InlineChannel, Manifest, MANIFEST_FILE};
pub use reconstruct::{reconstruct_personnel, reconstruct_weights, Reconstruction};
pub use report::{emit_report, num, ComparisonReport, Format, LeagueReport, ReconstructionReport, Report};
pub use table::{parse_table, read_table, write_table, LabeledTable};
