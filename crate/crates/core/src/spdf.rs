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

//! Support probability distributions.
//!
//! The support of an itemset is `certain_support` plus a sum of independent
//! Bernoulli trials, one per uncertain transaction. Its distribution is the
//! coefficient vector of the generating function
//! `∏ (1 - p_i + p_i·x)`, built one factor at a time. Frequentness only
//! needs the coefficients below `min_sup`, so the truncated form costs
//! `O(min_sup · N)`.

use thiserror::Error;

/// Largest polynomial-division remainder accepted by [`update_pdf`].
pub const DIVISION_TOLERANCE: f64 = 1e-6;

/// Rounding slack below zero that is clamped to 0.
pub const NEGATIVE_CLAMP: f64 = 1e-15;

#[derive(Debug, Error, PartialEq)]
pub enum SpdfError {
    #[error("probability {0} outside [0, 1)")]
    InvalidProbability(f64),
    #[error("cannot update a truncated distribution")]
    Truncated,
    #[error("factor with p = {p} does not divide the distribution (remainder {remainder:e})")]
    NotAFactor { p: f64, remainder: f64 },
    #[error("coefficient {index} is negative ({value:e})")]
    NegativeCoefficient { index: usize, value: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupportPdf {
    base: u64,
    coeffs: Vec<f64>,
    truncated_at: Option<usize>,
}

impl SupportPdf {
    pub fn new(base: u64, coeffs: Vec<f64>) -> SupportPdf {
        SupportPdf {
            base,
            coeffs,
            truncated_at: None,
        }
    }

    /// Certain support: `coeffs()[j]` is P(support = base + j).
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn truncated_at(&self) -> Option<usize> {
        self.truncated_at
    }

    pub fn total(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    /// P(support = s).
    pub fn prob(&self, support: u64) -> f64 {
        support
            .checked_sub(self.base)
            .and_then(|j| self.coeffs.get(j as usize))
            .copied()
            .unwrap_or(0.0)
    }

    /// (support, probability) pairs over the stored coefficients.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(j, &c)| (self.base + j as u64, c))
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(s, c)| s as f64 * c).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrequentnessQuery {
    pub min_sup: u64,
    pub tau: f64,
}

/// Multiplies `coeffs` in place by `(1 - p) + p·x`, keeping at most `cap`
/// coefficients. `coeffs` must be non-empty.
fn multiply_factor(coeffs: &mut Vec<f64>, p: f64, cap: usize) {
    let q = 1.0 - p;
    let n = coeffs.len();
    let top = coeffs[n - 1] * p;
    for j in (1..n).rev() {
        coeffs[j] = coeffs[j] * q + coeffs[j - 1] * p;
    }
    coeffs[0] *= q;
    if n < cap {
        coeffs.push(top);
    }
}

/// Full expansion of the generating function, shifted by `certain_support`.
pub fn support_pdf(certain_support: u64, probs: &[f64]) -> SupportPdf {
    let mut coeffs = Vec::with_capacity(probs.len() + 1);
    coeffs.push(1.0);
    for &p in probs {
        multiply_factor(&mut coeffs, p, usize::MAX);
    }
    SupportPdf::new(certain_support, coeffs)
}

/// Incremental, truncated generating function for P(support ≥ min_sup).
#[derive(Clone, Debug)]
pub struct TruncatedGf {
    head: Vec<f64>,
    spare: Vec<f64>,
    window: usize,
    base: u64,
    escaped: f64,
}

impl TruncatedGf {
    pub fn new(certain_support: u64, min_sup: u64) -> TruncatedGf {
        TruncatedGf::with_capacity(certain_support, min_sup, 0)
    }

    /// Reserves room for the coefficients `n` factors can produce.
    pub fn with_capacity(certain_support: u64, min_sup: u64, n: usize) -> TruncatedGf {
        let window = min_sup.saturating_sub(certain_support) as usize;
        let mut head = Vec::new();
        let mut spare = Vec::new();
        if window > 0 {
            head.reserve_exact(window.min(n + 1));
            spare.reserve_exact(window.min(n + 1));
            head.push(1.0);
        }
        TruncatedGf {
            head,
            spare,
            window,
            base: certain_support,
            escaped: if window == 0 { 1.0 } else { 0.0 },
        }
    }

    pub fn push(&mut self, p: f64) {
        if self.window == 0 {
            return;
        }
        let q = 1.0 - p;
        let n = self.head.len();
        let top = self.head[n - 1] * p;
        let grows = n < self.window;
        // spare holds the previous head, so this touches at most one slot
        self.spare.resize(n + usize::from(grows), 0.0);
        let (head, out) = (&self.head, &mut self.spare);
        out[0] = head[0] * q;
        for ((o, &c), &prev) in out[1..n].iter_mut().zip(&head[1..]).zip(&head[..n - 1]) {
            *o = c * q + prev * p;
        }
        if grows {
            out[n] = top;
        } else {
            self.escaped += top;
        }
        std::mem::swap(&mut self.head, &mut self.spare);
    }

    /// P(support ≥ min_sup) over the factors pushed so far: 1 minus the
    /// kept coefficients, accumulated as the mass pushed past the window.
    /// A lower bound on the final value until every factor has been pushed.
    pub fn tail(&self) -> f64 {
        self.escaped.clamp(0.0, 1.0)
    }

    pub fn into_pdf(self) -> SupportPdf {
        SupportPdf {
            base: self.base,
            coeffs: self.head,
            truncated_at: Some(self.window),
        }
    }
}

/// Exact P(certain_support + Σ Bernoulli(p_i) ≥ min_sup), truncated form.
pub fn frequentness(certain_support: u64, probs: &[f64], min_sup: u64) -> f64 {
    if certain_support >= min_sup {
        return 1.0;
    }
    if certain_support + (probs.len() as u64) < min_sup {
        return 0.0;
    }
    let mut gf = TruncatedGf::with_capacity(certain_support, min_sup, probs.len());
    for &p in probs {
        gf.push(p);
    }
    gf.tail()
}

/// Frequentness with early stop: returns as soon as the partial value
/// reaches `tau`, flagging that the returned value is a lower bound.
pub fn frequentness_probability(
    certain_support: u64,
    probs: &[f64],
    q: &FrequentnessQuery,
) -> (f64, bool) {
    if certain_support >= q.min_sup {
        return (1.0, false);
    }
    if certain_support + (probs.len() as u64) < q.min_sup {
        return (0.0, false);
    }
    let mut gf = TruncatedGf::with_capacity(certain_support, q.min_sup, probs.len());
    for (i, &p) in probs.iter().enumerate() {
        gf.push(p);
        let tail = gf.tail();
        if i + 1 < probs.len() && tail >= q.tau {
            return (tail, true);
        }
    }
    (gf.tail(), false)
}

/// Truncated distribution: coefficients of total support below `min_sup`.
pub fn truncated_pdf(certain_support: u64, probs: &[f64], min_sup: u64) -> SupportPdf {
    let mut gf = TruncatedGf::new(certain_support, min_sup);
    for &p in probs {
        gf.push(p);
    }
    gf.into_pdf()
}

/// Poisson binomial recurrence over "at least j of the first i" tail
/// probabilities: `P[i][j] = P[i-1][j-1]·p_i + P[i-1][j]·(1 - p_i)`.
pub fn pbr_frequentness(certain_support: u64, probs: &[f64], min_sup: u64) -> f64 {
    if certain_support >= min_sup {
        return 1.0;
    }
    let need = (min_sup - certain_support) as usize;
    if need > probs.len() {
        return 0.0;
    }
    // at_least[j] = P(at least j of the first i trials succeed); index 0 is 1
    let mut at_least = vec![0.0; need + 1];
    at_least[0] = 1.0;
    for (i, &p) in probs.iter().enumerate() {
        let q = 1.0 - p;
        let live = &mut at_least[..=need.min(i + 1)];
        for j in (1..live.len()).rev() {
            live[j] = live[j - 1] * p + live[j] * q;
        }
    }
    at_least[need]
}

pub fn expected_support(certain_support: u64, probs: &[f64]) -> f64 {
    certain_support as f64 + probs.iter().sum::<f64>()
}

/// Replaces the factor `(1 - old_p) + old_p·x` of an untruncated
/// distribution with `(1 - new_p) + new_p·x`. A zero probability stands for
/// "no factor", so `old_p = 0` inserts and `new_p = 0` removes.
pub fn update_pdf(pdf: &SupportPdf, old_p: f64, new_p: f64) -> Result<SupportPdf, SpdfError> {
    for p in [old_p, new_p] {
        if !(0.0..1.0).contains(&p) {
            return Err(SpdfError::InvalidProbability(p));
        }
    }
    if pdf.truncated_at.is_some() {
        return Err(SpdfError::Truncated);
    }
    let mut coeffs = if old_p > 0.0 {
        divide_factor(&pdf.coeffs, old_p)?
    } else {
        pdf.coeffs.clone()
    };
    if new_p > 0.0 {
        multiply_factor(&mut coeffs, new_p, usize::MAX);
    }
    for (index, c) in coeffs.iter_mut().enumerate() {
        if *c < 0.0 {
            if *c < -NEGATIVE_CLAMP {
                return Err(SpdfError::NegativeCoefficient { index, value: *c });
            }
            *c = 0.0;
        }
    }
    Ok(SupportPdf::new(pdf.base, coeffs))
}

/// Synthetic division by `(1 - p) + p·x`. Runs from the low end when
/// `p ≤ 0.5` and from the high end otherwise, so the recurrence multiplier
/// `p / (1 - p)` (or its inverse) never exceeds 1.
fn divide_factor(f: &[f64], p: f64) -> Result<Vec<f64>, SpdfError> {
    let n = f.len();
    if n < 2 {
        return Err(SpdfError::NotAFactor {
            p,
            remainder: f.first().copied().unwrap_or(0.0),
        });
    }
    let a = 1.0 - p;
    let b = p;
    let mut q = vec![0.0; n - 1];
    let remainder = if p <= 0.5 {
        q[0] = f[0] / a;
        for j in 1..n - 1 {
            q[j] = (f[j] - b * q[j - 1]) / a;
        }
        f[n - 1] - b * q[n - 2]
    } else {
        q[n - 2] = f[n - 1] / b;
        for j in (1..n - 1).rev() {
            q[j - 1] = (f[j] - a * q[j]) / b;
        }
        f[0] - a * q[0]
    };
    if remainder.abs() > DIVISION_TOLERANCE {
        return Err(SpdfError::NotAFactor { p, remainder });
    }
    Ok(q)
}
