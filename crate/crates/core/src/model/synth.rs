// Copyright 2026 The profp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Seeded synthetic databases. Each (transaction, item) cell is certain
//! with probability `p1`, absent with probability `p0`, and otherwise
//! present with a probability drawn uniformly from (0, 1).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::format::round_significant;
use super::{DbError, UncertainDatabase};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub n_transactions: usize,
    pub n_items: usize,
    pub p0: f64,
    pub p1: f64,
    pub seed: u64,
}

impl GenParams {
    pub fn validate(&self) -> Result<(), DbError> {
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        if !unit(self.p0) || !unit(self.p1) {
            return Err(DbError::InvalidParams(format!(
                "p0 = {} and p1 = {} must lie in [0, 1]",
                self.p0, self.p1
            )));
        }
        // 1e-12 absorbs decimal sums such as 0.3 + 0.4 + 0.3.
        if self.p0 + self.p1 > 1.0 + 1e-12 {
            return Err(DbError::InvalidParams(format!(
                "p0 + p1 = {} exceeds 1",
                self.p0 + self.p1
            )));
        }
        Ok(())
    }
}

/// Item labels `i0`, `i1`, ... zero-padded so label order equals index order.
pub fn item_label(index: usize, n_items: usize) -> String {
    let width = n_items.saturating_sub(1).to_string().len();
    format!("i{index:0width$}")
}

/// Generates a database with ChaCha8 seeded from `params.seed`. Uncertain
/// probabilities are rounded to 12 significant digits (the precision of the
/// text format) and redrawn if that lands on 0 or 1.
pub fn generate_synthetic(params: &GenParams) -> Result<UncertainDatabase, DbError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let labels: Vec<String> = (0..params.n_items)
        .map(|i| item_label(i, params.n_items))
        .collect();
    let mut rows = Vec::with_capacity(params.n_transactions);
    for _ in 0..params.n_transactions {
        let mut row = Vec::new();
        for label in &labels {
            let cell: f64 = rng.gen();
            if cell < params.p1 {
                row.push((label.as_str(), 1.0));
            } else if cell < params.p1 + params.p0 {
                continue;
            } else {
                let prob = loop {
                    let p = round_significant(rng.gen::<f64>());
                    if p > 0.0 && p < 1.0 {
                        break p;
                    }
                };
                row.push((label.as_str(), prob));
            }
        }
        rows.push(row);
    }
    UncertainDatabase::from_rows(&rows)
}
