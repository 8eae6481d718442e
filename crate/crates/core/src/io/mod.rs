//! JSON-lines report output and configuration snapshots.

mod reports;
mod snapshot;

pub use reports::{read_reports, report_line, write_reports};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot, SNAPSHOT_FORMAT};
