//! Shared fixtures for the criterion benches.

use qtorus_core::{enumerate_tilings, EnumerateOptions, TilingStore, Torus, TorusSpec};

pub fn fixture(n: u32, m: u32, r: u32) -> (Torus, TilingStore) {
    let torus = Torus::new(TorusSpec::new(n, m, r).expect("valid spec"));
    let store = enumerate_tilings(&torus, EnumerateOptions::default()).expect("enumeration");
    (torus, store)
}
