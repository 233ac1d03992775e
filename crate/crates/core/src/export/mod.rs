//! CSV, JSON and SVG outputs.

mod svg;
mod tables;

pub use svg::{basin_svg, debut_svg, BASIN_COLOR_NEG, BASIN_COLOR_POS, COMPLEMENT_COLOR};
pub use tables::{
    basin_table_csv, best_track_csv, cluster_csv, debut_records, field_from_records, parse_debut_csv, parse_debut_json,
    records_to_csv, records_to_json, DebutRecord,
};
