//! `{"cells": {dim: [id…]}, "boundary": {id: [id…]}}`, with cell labels as ids.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use smallcover_core::CellComplex;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDump {
    pub cells: BTreeMap<usize, Vec<String>>,
    pub boundary: BTreeMap<String, Vec<String>>,
}

impl ComplexDump {
    pub fn from_complex(c: &CellComplex) -> Self {
        let mut cells = BTreeMap::new();
        let mut boundary = BTreeMap::new();
        for d in 0..c.dims() {
            cells.insert(d, c.labels(d).to_vec());
            if d == 0 {
                continue;
            }
            for (i, label) in c.labels(d).iter().enumerate() {
                let faces = c.boundary(d, i).iter().map(|&b| c.label(d - 1, b).to_owned()).collect();
                boundary.insert(label.clone(), faces);
            }
        }
        Self { cells, boundary }
    }

    /// Rebuilds the complex; fails on unknown ids or a bad boundary.
    pub fn to_complex(&self) -> Result<CellComplex, CliError> {
        let dims = self.cells.keys().next_back().map_or(0, |d| d + 1);
        let mut index: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for (&d, ids) in &self.cells {
            for (i, id) in ids.iter().enumerate() {
                index.insert(id, (d, i));
            }
        }
        let mut labels = vec![Vec::new(); dims];
        let mut boundary = vec![Vec::new(); dims];
        for d in 0..dims {
            let ids = self.cells.get(&d).cloned().unwrap_or_default();
            for id in &ids {
                let faces = self.boundary.get(id).cloned().unwrap_or_default();
                let mut bd = Vec::with_capacity(faces.len());
                for f in &faces {
                    match index.get(f.as_str()) {
                        Some(&(fd, fi)) if fd + 1 == d => bd.push(fi),
                        _ => {
                            return Err(CliError::Schema(format!(
                                "cell {id}: boundary entry {f} is not a cell of dimension {}",
                                d.saturating_sub(1)
                            )))
                        }
                    }
                }
                boundary[d].push(bd);
            }
            labels[d] = ids;
        }
        CellComplex::new(labels, boundary).map_err(|e| CliError::Math(e.to_string()))
    }
}
