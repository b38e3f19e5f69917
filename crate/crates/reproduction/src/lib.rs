//! Published reference tables, the scenario rebuilt from them, small
//! hand-checkable fixtures and the property checks run by the acceptance suite.

pub mod fixtures;
pub mod golden;
pub mod oracle;
pub mod properties;
pub mod reference;
