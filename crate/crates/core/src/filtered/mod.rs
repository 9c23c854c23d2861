//! Strict filtered complexes: Whitehead towers, décalage, spectral
//! sequences, graded pieces and filtered homs.

mod filtration;
mod pages;

pub use filtration::{
    check_filtered_map, convert_index, decalage, diagonal_connective_cover, filtered_hom_classes, filtered_hom_subcomplex,
    filtered_quasi_iso, graded_map, is_diagonal_connective, whitehead_tower, Direction, FilteredComplex,
};
pub use pages::{spectral_sequence, stable_page, BiGradedPages};

use std::collections::BTreeMap;

use crate::complexes::Complex;

/// Internal-degree indexed family of complexes or filtered complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFamily<T> {
    pub components: BTreeMap<i64, T>,
}

impl<T> GradedFamily<T> {
    pub fn new() -> Self {
        GradedFamily { components: BTreeMap::new() }
    }

    pub fn insert(&mut self, j: i64, value: T) {
        self.components.insert(j, value);
    }

    pub fn get(&self, j: i64) -> Option<&T> {
        self.components.get(&j)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &T)> {
        self.components.iter()
    }
}

impl<T> Default for GradedFamily<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Convenience alias for the plain graded case.
pub type GradedComplexes = GradedFamily<Complex>;
