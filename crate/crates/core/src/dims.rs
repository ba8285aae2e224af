//! Graded dimensions of `M(l)`, strong-grading sweeps and `C_1` quotients.
//!
//! Bigrades are written `(m, n)` with `m` the N-weight and `n` the weight.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::exactmath::{RatMatrix, Rational};
use crate::fock::{
    enumerate_basis, module_basis, BasisVector, FockState, ModuleSpec, ModuleState,
};
use crate::vertexops::{spec_params, sweep_states, vertex_mode, with, CheckReport, Truncation, VertexError};

/// A table of dimensions indexed by `(m, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimTable {
    pub d: usize,
    pub entries: BTreeMap<(u64, u64), u128>,
}

impl DimTable {
    pub fn new(d: usize) -> Self {
        DimTable {
            d,
            entries: BTreeMap::new(),
        }
    }

    /// Missing entries read as 0.
    pub fn get(&self, m: u64, n: u64) -> u128 {
        self.entries.get(&(m, n)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, m: u64, n: u64, value: u128) {
        self.entries.insert((m, n), value);
    }

    /// Total over `n` at fixed `m`.
    pub fn row_total(&self, m: u64) -> u128 {
        self.entries
            .iter()
            .filter(|((mm, _), _)| *mm == m)
            .map(|(_, v)| *v)
            .sum()
    }
}

impl Serialize for DimTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for ((m, n), v) in &self.entries {
            seq.serialize_element(&json!({"m": m, "n": n, "dim": v.to_string()}))?;
        }
        seq.end()
    }
}

/// Colored bipartite partitions of `(m, n)`: multisets of parts
/// `(color, a, b)` with `a >= 0`, `b >= 1`, summing to `(m, n)`.
pub fn bipartite_count(d: usize, m: u64, n: u64) -> u128 {
    bipartite_table(d, n, m).get(m, n)
}

/// [`bipartite_count`] for all `n <= max_n`, `m <= max_m`, by adding one
/// part type at a time (unbounded knapsack).
pub fn bipartite_table(d: usize, max_n: u64, max_m: u64) -> DimTable {
    let (pn, qm) = (max_n as usize, max_m as usize);
    let mut t = vec![vec![0u128; pn + 1]; qm + 1];
    t[0][0] = 1;
    for a in 0..=qm {
        for b in 1..=pn {
            for _ in 0..d {
                for m in a..=qm {
                    for n in b..=pn {
                        t[m][n] += t[m - a][n - b];
                    }
                }
            }
        }
    }
    to_table(d, &t)
}

fn to_table(d: usize, grid: &[Vec<u128>]) -> DimTable {
    let mut out = DimTable::new(d);
    for (m, row) in grid.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            out.set(m as u64, n as u64, *v);
        }
    }
    out
}

/// `|enumerate_basis(d, m, n)|` for every cell.
pub fn enumeration_table(d: usize, max_n: u64, max_m: u64) -> DimTable {
    let cells: Vec<(u64, u64)> = (0..=max_m)
        .flat_map(|m| (0..=max_n).map(move |n| (m, n)))
        .collect();
    let counts: Vec<u128> = cells
        .par_iter()
        .map(|&(m, n)| enumerate_basis(d, m, n).len() as u128)
        .collect();
    let mut out = DimTable::new(d);
    for ((m, n), v) in cells.into_iter().zip(counts) {
        out.set(m, n, v);
    }
    out
}

/// Coefficients of `p^n q^m` in `∏_{a>=0, b>=1} (1 - q^a p^b)^{-d}`, found by
/// expanding the finite product `F = ∏ (1 - q^a p^b)^d` and inverting it.
pub fn gf_product_count(d: usize, max_n: u64, max_m: u64) -> DimTable {
    let (pn, qm) = (max_n as usize, max_m as usize);
    let mut f = vec![vec![0i128; pn + 1]; qm + 1];
    f[0][0] = 1;
    for a in 0..=qm {
        for b in 1..=pn {
            for _ in 0..d {
                // multiply by (1 - q^a p^b), high cells first
                for m in (a..=qm).rev() {
                    for n in (b..=pn).rev() {
                        f[m][n] -= f[m - a][n - b];
                    }
                }
            }
        }
    }
    let mut g = vec![vec![0i128; pn + 1]; qm + 1];
    for m in 0..=qm {
        for n in 0..=pn {
            if (m, n) == (0, 0) {
                g[0][0] = 1;
                continue;
            }
            let mut acc = 0i128;
            for m2 in 0..=m {
                for n2 in 0..=n {
                    if (m2, n2) != (0, 0) && f[m2][n2] != 0 {
                        acc -= f[m2][n2] * g[m - m2][n - n2];
                    }
                }
            }
            g[m][n] = acc;
        }
    }
    let grid: Vec<Vec<u128>> = g
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| u128::try_from(v).expect("partition counts are nonnegative"))
                .collect()
        })
        .collect();
    to_table(d, &grid)
}

/// A truncated series in `x^{±1}`, `p`, `q`: terms with `p`-degree above
/// `max_p`, `q`-degree above `max_q` or `x`-degree outside `x_range` are
/// dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries2 {
    coeffs: BTreeMap<(i64, u32, u32), Rational>,
    max_p: u32,
    max_q: u32,
    x_range: (i64, i64),
}

impl LaurentSeries2 {
    pub fn one(max_p: u32, max_q: u32, x_range: (i64, i64)) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0, 0, 0), Rational::one());
        LaurentSeries2 {
            coeffs,
            max_p,
            max_q,
            x_range,
        }
    }

    pub fn coeff(&self, x: i64, p: u32, q: u32) -> Rational {
        self.coeffs.get(&(x, p, q)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, u32, u32), &Rational)> {
        self.coeffs.iter()
    }

    fn keeps(&self, x: i64, p: u32, q: u32) -> bool {
        p <= self.max_p && q <= self.max_q && self.x_range.0 <= x && x <= self.x_range.1
    }

    /// Divides by `1 - x^e p^a q^b` (multiplies by the geometric series).
    ///
    /// The truncation is exact only when every factor moves the `x`-degree
    /// in one direction, which holds for each Pochhammer factor used here.
    pub fn divide_by_one_minus(&mut self, e: i64, a: u32, b: u32) {
        assert!(e != 0 || a != 0 || b != 0, "1/(1 - 1) is not a series");
        let mut out: BTreeMap<(i64, u32, u32), Rational> = BTreeMap::new();
        let mut frontier: Vec<((i64, u32, u32), Rational)> =
            std::mem::take(&mut self.coeffs).into_iter().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for ((x, p, q), c) in frontier {
                if !self.keeps(x, p, q) {
                    continue;
                }
                *out.entry((x, p, q)).or_insert_with(Rational::zero) += &c;
                next.push(((x + e, p + a, q + b), c));
            }
            frontier = next;
        }
        out.retain(|_, c| !c.is_zero());
        self.coeffs = out;
    }

    /// `1 / (x^e p^a q^b; p^sp q^sq)_∞`, cut to the bounds.
    pub fn pochhammer_reciprocal(
        (e, a, b): (i64, u32, u32),
        (sp, sq): (u32, u32),
        max_p: u32,
        max_q: u32,
        x_range: (i64, i64),
    ) -> Self {
        assert!(sp + sq > 0, "the Pochhammer step must have positive degree");
        let mut s = LaurentSeries2::one(max_p, max_q, x_range);
        let mut k = 0u32;
        loop {
            let (pa, qb) = (a + k * sp, b + k * sq);
            if pa > max_p || qb > max_q {
                break;
            }
            s.divide_by_one_minus(e, pa, qb);
            k += 1;
        }
        s
    }

    /// Coefficients of `x^0 p^n q^m` in `self * other`.
    pub fn constant_term_of_product(&self, other: &LaurentSeries2) -> BTreeMap<(u32, u32), Rational> {
        let mut out: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        let max_p = self.max_p.min(other.max_p);
        let max_q = self.max_q.min(other.max_q);
        for (&(x1, p1, q1), c1) in &self.coeffs {
            for (&(x2, p2, q2), c2) in &other.coeffs {
                if x1 + x2 == 0 && p1 + p2 <= max_p && q1 + q2 <= max_q {
                    *out.entry((p1 + p2, q1 + q2)).or_insert_with(Rational::zero) += c1 * c2;
                }
            }
        }
        out
    }
}

/// The `x^0` coefficient of `1/((x^{-1}p; p)_∞ (x; q)_∞)` for `n <= max_n`
/// (`p`-degree) and `m <= max_m` (`q`-degree).
///
/// The first factor carries `x^{-k}` with `k` at most the `p`-degree, so the
/// second is cut at `x`-degree `max_n`.
pub fn gf_paper_ct(max_n: u64, max_m: u64) -> DimTable {
    let (pn, qm) = (max_n as u32, max_m as u32);
    let left = LaurentSeries2::pochhammer_reciprocal((-1, 1, 0), (1, 0), pn, qm, (-(pn as i64), 0));
    let right = LaurentSeries2::pochhammer_reciprocal((1, 0, 0), (0, 1), pn, qm, (0, pn as i64));
    let ct = left.constant_term_of_product(&right);
    let mut out = DimTable::new(1);
    for m in 0..=max_m {
        for n in 0..=max_n {
            let v = ct
                .get(&(n as u32, m as u32))
                .and_then(Rational::to_i64)
                .unwrap_or(0);
            out.set(m, n, v as u128);
        }
    }
    out
}

/// Partitions of `n` into exactly `k` positive parts.
pub fn partitions_exact_parts(k: u64, n: u64) -> u128 {
    let (k, n) = (k as usize, n as usize);
    // t[j][s]: partitions of s into exactly j parts
    let mut t = vec![vec![0u128; n + 1]; k + 1];
    t[0][0] = 1;
    for j in 1..=k {
        for s in j..=n {
            t[j][s] = t[j - 1][s - 1] + t[j][s - j];
        }
    }
    t[k][n]
}

/// Partitions of `m` into `k` nonnegative parts.
pub fn partitions_nonneg_parts(k: u64, m: u64) -> u128 {
    (0..=k).map(|j| partitions_exact_parts(j, m)).sum()
}

/// `Σ_k p(k, n) p'(k, m)`: the constant term above, read off termwise.
pub fn ct_by_parts(m: u64, n: u64) -> u128 {
    (0..=n)
        .map(|k| partitions_exact_parts(k, n) * partitions_nonneg_parts(k, m))
        .sum()
}

/// For each sample `(v, j)` and every basis state `w` within `tr`: every
/// term of `v_j w` has N-weight at most `nwt(v) + nwt(w)` and weight
/// `wt(w) + wt(v) - j - 1`. Offending terms form the defect.
pub fn check_strong_grading(
    spec: &ModuleSpec,
    tr: &Truncation,
    sample: &[(FockState, i64)],
) -> Result<CheckReport, VertexError> {
    let basis = module_basis(spec.d(), spec.r(), tr.max_wt, tr.max_nwt);
    let mut reports = Vec::new();
    let vacuum_ok = FockState::vacuum().grading()?;
    for (v, j) in sample {
        let (vwt, vnwt) = if v.is_zero() {
            (0, 0)
        } else {
            let g = v.grading()?;
            (g.wt_shift as i64, g.nwt)
        };
        let params = with(spec_params(spec, tr), json!({"v": v, "j": j}));
        reports.push(sweep_states("strong-grading", params, &basis, |w| {
            let (b, _) = w.iter().next().expect("basis state");
            let out = vertex_mode(v, *j, w, spec)?;
            let want_wt = b.mono.weight() as i64 + vwt - j - 1;
            let defect: ModuleState = out
                .iter()
                .filter(|(key, _)| {
                    key.mono.nweight() > vnwt + b.mono.nweight()
                        || key.mono.weight() as i64 != want_wt
                })
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect();
            Ok((defect, true))
        })?);
    }
    let mut report = CheckReport::merge(
        "strong-grading",
        with(spec_params(spec, tr), json!({"samples": sample.len()})),
        reports,
    );
    if vacuum_ok.wt_shift != 0 || vacuum_ok.nwt != 0 {
        report.defect_zero = false;
    }
    Ok(report)
}

/// Per bigrade `(m, n)` within `tr`: `dim W^(m)_(n)` minus the dimension of
/// the part of `span{u_{-1} w}` lying in that bigrade, where `u` runs over
/// basis monomials with `0 < wt(u) <= n`, `nwt(u) <= m` and `w` over basis
/// states with `wt(w) = n - wt(u)`, `nwt(w) <= tr.max_nwt`.
///
/// A generator may spread over several N-weights, so the bigraded slice is
/// `rank(G) - rank(G restricted to coordinates outside the slice)`.
pub fn c1_quotient_dims(spec: &ModuleSpec, tr: &Truncation) -> Result<DimTable, VertexError> {
    let cells: Vec<(u64, u64)> = (0..=tr.max_nwt)
        .flat_map(|m| (0..=tr.max_wt).map(move |n| (m, n)))
        .collect();
    let values: Vec<u128> = cells
        .par_iter()
        .map(|&(m, n)| c1_cell(spec, tr, m, n))
        .collect::<Result<_, _>>()?;
    let mut out = DimTable::new(spec.d());
    for ((m, n), v) in cells.into_iter().zip(values) {
        out.set(m, n, v);
    }
    Ok(out)
}

fn c1_cell(spec: &ModuleSpec, tr: &Truncation, m: u64, n: u64) -> Result<u128, VertexError> {
    let slice = enumerate_basis(spec.d(), m, n).len() * spec.r();
    let mut gens: Vec<ModuleState> = Vec::new();
    for wu in 1..=n {
        let ws: Vec<BasisVector> = (0..=tr.max_nwt)
            .flat_map(|mw| enumerate_basis(spec.d(), mw, n - wu))
            .flat_map(|mono| (0..spec.r()).map(move |t| BasisVector::new(mono.clone(), t)))
            .collect();
        for mu in 0..=m {
            for u in enumerate_basis(spec.d(), mu, wu) {
                let u = FockState::basis(u);
                for w in &ws {
                    let g = vertex_mode(&u, -1, &ModuleState::basis(w.clone()), spec)?;
                    if !g.is_zero() {
                        gens.push(g);
                    }
                }
            }
        }
    }
    if gens.is_empty() {
        return Ok(slice as u128);
    }
    let mut coords: BTreeMap<BasisVector, usize> = BTreeMap::new();
    for g in &gens {
        for k in g.keys() {
            let next = coords.len();
            coords.entry(k.clone()).or_insert(next);
        }
    }
    let build = |keep: &dyn Fn(&BasisVector) -> bool| {
        let mut mat = RatMatrix::zeros(gens.len(), coords.len());
        for (r, g) in gens.iter().enumerate() {
            for (k, c) in g.iter() {
                if keep(k) {
                    mat.set(r, coords[k], c.clone());
                }
            }
        }
        mat
    };
    let full = build(&|_| true).rank();
    let outside = build(&|k| k.mono.nweight() != m).rank();
    Ok((slice - (full - outside)) as u128)
}
