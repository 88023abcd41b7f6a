#![allow(dead_code)]

use std::path::PathBuf;

use corsmal_eval::dataset::{
    build_density_table, load_annotations, ConfigurationAnnotation, DensityTable, Split,
};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
}

pub fn annotations() -> Vec<ConfigurationAnnotation> {
    load_annotations(fixture("annotations.csv")).expect("fixture annotations load")
}

pub fn densities(anns: &[ConfigurationAnnotation]) -> DensityTable {
    let train: Vec<_> = anns
        .iter()
        .filter(|a| a.split == Split::Train)
        .cloned()
        .collect();
    build_density_table(&train).expect("fixture densities")
}
