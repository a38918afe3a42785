//! Ingestion of genotype-style tables, preprocessing, and raster export.

pub mod raster;
pub mod table;

pub use raster::{raster_bytes, raster_export};
pub use table::{load_table, parse_table, preprocess_report, ImputeReport, RawTable, ResponseColumn};
