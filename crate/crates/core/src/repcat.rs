//! Top spaces of induced modules: evaluation actions, the generalized
//! Casimir, vacuum spaces, logarithmic detection and intertwiner counts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exactmath::{RatMatrix, Rational};
use crate::fock::{
    apply_mode, enumerate_basis, BasisVector, GenIndex, ModeOp, ModuleKind, ModuleSpec,
    ModuleState, SpecError,
};
use crate::vertexops::Truncation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("c^2 = 1: the geometric tail 1/(1 - c^2) diverges")]
    UnitEvaluationPoint,
    #[error("color index {color} out of range 1..={d}")]
    ColorOutOfRange { color: u32, d: usize },
    #[error("top spaces have different color counts: {0:?}")]
    MismatchedColors([usize; 3]),
    #[error("the Hom identification is only available at c = 0 (got c = {0})")]
    NonzeroEvaluationPoint(Rational),
    #[error("operation needs an evaluation-type module")]
    NotEvaluation,
}

/// A finite-dimensional top space `Ω_λ`: commuting matrices `H_i` with
/// `(H_i - λ_i)` nilpotent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopSpace {
    lambda: Vec<Rational>,
    #[serde(rename = "H")]
    h: Vec<RatMatrix>,
}

impl TopSpace {
    /// Validates `h` and reads each `λ_i` off as `tr(H_i) / r`.
    pub fn new(h: Vec<RatMatrix>) -> Result<Self, SpecError> {
        let spec = ModuleSpec::logarithmic(h, Rational::zero(), Rational::one())?;
        Ok(Self::from_spec(&spec))
    }

    /// One-dimensional top space `C_λ`.
    pub fn scalar(lambda: Vec<Rational>) -> Self {
        let h = lambda.iter().map(|x| RatMatrix::scalar(1, x)).collect();
        TopSpace { lambda, h }
    }

    /// One color: `λ` plus a nilpotent made of Jordan blocks of size `block`
    /// on an `r`-dimensional space (`block` must divide `r`).
    pub fn jordan(lambda: Rational, r: usize, block: usize) -> Result<Self, SpecError> {
        if r == 0 || block == 0 || !r.is_multiple_of(block) {
            return Err(SpecError::EmptyTop);
        }
        let mut m = RatMatrix::scalar(r, &lambda);
        for i in 0..r - 1 {
            if (i + 1) % block != 0 {
                m.set(i, i + 1, Rational::one());
            }
        }
        Ok(TopSpace {
            lambda: vec![lambda],
            h: vec![m],
        })
    }

    pub fn from_spec(spec: &ModuleSpec) -> Self {
        TopSpace {
            lambda: spec.lambda().to_vec(),
            h: spec.h().to_vec(),
        }
    }

    pub fn d(&self) -> usize {
        self.h.len()
    }

    pub fn r(&self) -> usize {
        self.h[0].rows()
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    pub fn h(&self) -> &[RatMatrix] {
        &self.h
    }

    /// The dual representation: `H_i ↦ -H_i^T`.
    pub fn dual(&self) -> TopSpace {
        TopSpace {
            lambda: self.lambda.iter().map(|x| -x).collect(),
            h: self
                .h
                .iter()
                .map(|m| m.transpose().scale(&-Rational::one()))
                .collect(),
        }
    }

    /// The induced module `M(l) ⊗ Ω(λ, c)`.
    pub fn induce(&self, c: Rational, level: Rational) -> Result<ModuleSpec, SpecError> {
        ModuleSpec::new(
            ModuleKind::Evaluation,
            self.d(),
            level,
            c,
            self.lambda.clone(),
            self.h.clone(),
        )
    }
}

/// The matrix `f(c) H_i` by which `u^(i) f(t)` acts on an evaluation top
/// space; `f` is given as `(exponent, coefficient)` pairs.
pub fn eval_action(
    gen_color: u32,
    f_powers: &[(u32, Rational)],
    top: &TopSpace,
    c: &Rational,
) -> Result<RatMatrix, RepError> {
    if gen_color == 0 || gen_color as usize > top.d() {
        return Err(RepError::ColorOutOfRange {
            color: gen_color,
            d: top.d(),
        });
    }
    let f_at_c: Rational = f_powers
        .iter()
        .map(|(e, coeff)| coeff * &c.pow(*e as i32))
        .sum();
    Ok(top.h[gen_color as usize - 1].scale(&f_at_c))
}

fn norm(lambda: &[Rational]) -> Rational {
    lambda.iter().map(|x| x * x).sum()
}

/// The generalized Casimir `Σ_i Σ_n (u^(i) t^n)^2` on `V(λ, c)`:
/// `⟨λ, λ⟩ / (1 - c^2)`.
pub fn casimir_scalar(lambda: &[Rational], c: &Rational) -> Result<Rational, RepError> {
    let denom = Rational::one() - c * c;
    if denom.is_zero() {
        return Err(RepError::UnitEvaluationPoint);
    }
    Ok(norm(lambda) / denom)
}

/// The Casimir sum cut at `n <= cutoff`: `Σ_{n=0}^{cutoff} c^{2n} ⟨λ, λ⟩`.
pub fn casimir_partial(lambda: &[Rational], c: &Rational, cutoff: u32) -> Rational {
    let nrm = norm(lambda);
    let c2 = c * c;
    let mut power = Rational::one();
    let mut acc = Rational::zero();
    for _ in 0..=cutoff {
        acc += &nrm * &power;
        power *= &c2;
    }
    acc
}

/// A basis of the joint kernel of all annihilation modes, computed one
/// bigrade at a time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VacuumSpace {
    pub vectors: Vec<ModuleState>,
    /// `(nwt, wt)` pairs that were scanned.
    pub bigrades_scanned: Vec<(u64, u64)>,
}

impl VacuumSpace {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Vectors within `tr` killed by every `(u^(i) t^j)(n)` with `0 < n <= tr.max_wt`
/// and `j <= tr.max_nwt`.
///
/// Annihilation modes are homogeneous, so the joint kernel is the direct sum
/// of its bigraded pieces.
pub fn vacuum_space(spec: &ModuleSpec, tr: &Truncation) -> VacuumSpace {
    let mut vectors = Vec::new();
    let mut scanned = Vec::new();
    for n in 0..=tr.max_wt {
        for m in 0..=tr.max_nwt {
            scanned.push((m, n));
            let cols: Vec<BasisVector> = enumerate_basis(spec.d(), m, n)
                .into_iter()
                .flat_map(|mono| (0..spec.r()).map(move |t| BasisVector::new(mono.clone(), t)))
                .collect();
            if cols.is_empty() {
                continue;
            }
            let mut rows: BTreeMap<(ModeOp, BasisVector), usize> = BTreeMap::new();
            let mut entries: Vec<(usize, usize, Rational)> = Vec::new();
            for (ci, b) in cols.iter().enumerate() {
                let w = ModuleState::basis(b.clone());
                for color in 1..=spec.d() as u32 {
                    for j in 0..=tr.max_nwt.min(m) as u32 {
                        for mode in 1..=tr.max_wt.min(n) as i64 {
                            let op = ModeOp::new(GenIndex::new(color, j), mode);
                            let img = apply_mode(op, &w, spec).expect("color in range");
                            for (key, c) in img.iter() {
                                let next = rows.len();
                                let ri = *rows.entry((op, key.clone())).or_insert(next);
                                entries.push((ri, ci, c.clone()));
                            }
                        }
                    }
                }
            }
            let mut mat = RatMatrix::zeros(rows.len(), cols.len());
            for (r, c, v) in entries {
                let cur = mat.get(r, c) + &v;
                mat.set(r, c, cur);
            }
            let (_, null) = mat.rank_nullspace();
            for v in null {
                vectors.push(
                    cols.iter()
                        .zip(v)
                        .map(|(b, x)| (b.clone(), x))
                        .collect::<ModuleState>(),
                );
            }
        }
    }
    VacuumSpace {
        vectors,
        bigrades_scanned: scanned,
    }
}

/// `L(0)` on the top space: `(1 / (2l(1 - c^2))) Σ_i H_i^2`.
pub fn l0_top_matrix(spec: &ModuleSpec) -> Result<RatMatrix, RepError> {
    if spec.kind() == ModuleKind::Adjoint {
        return Ok(RatMatrix::zeros(1, 1));
    }
    let denom = Rational::from_integer(2) * spec.level() * (Rational::one() - spec.c() * spec.c());
    if denom.is_zero() {
        return Err(RepError::UnitEvaluationPoint);
    }
    Ok(spec.h_square_sum().scale(&denom.recip()))
}

/// The single eigenvalue `⟨λ, λ⟩ / (2l(1 - c^2))` of [`l0_top_matrix`].
pub fn l0_top_eigenvalue(spec: &ModuleSpec) -> Result<Rational, RepError> {
    let denom = Rational::from_integer(2) * spec.level() * (Rational::one() - spec.c() * spec.c());
    if denom.is_zero() {
        return Err(RepError::UnitEvaluationPoint);
    }
    Ok(spec.lambda_norm() / denom)
}

/// Jordan block sizes of `L(0)` on the top space (largest first) and whether
/// any block has size at least 2.
pub fn is_genuine_logarithmic(spec: &ModuleSpec) -> Result<(bool, Vec<usize>), RepError> {
    if spec.kind() != ModuleKind::Evaluation {
        return Err(RepError::NotEvaluation);
    }
    let m = l0_top_matrix(spec)?;
    let ev = l0_top_eigenvalue(spec)?;
    let blocks = m
        .jordan_structure(&ev)
        .expect("top-space matrices are square");
    Ok((blocks.iter().any(|&b| b >= 2), blocks))
}

/// Three top spaces `(Ω_1, Ω_2, Ω_3)` at evaluation point 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomProblem {
    pub source: TopSpace,
    pub middle: TopSpace,
    pub target: TopSpace,
}

impl HomProblem {
    pub fn new(source: TopSpace, middle: TopSpace, target: TopSpace) -> Self {
        HomProblem {
            source,
            middle,
            target,
        }
    }

    /// Builds the problem from three induced modules; all must sit at `c = 0`.
    pub fn from_modules(specs: [&ModuleSpec; 3]) -> Result<Self, RepError> {
        for s in specs {
            if s.kind() != ModuleKind::Evaluation {
                return Err(RepError::NotEvaluation);
            }
            if !s.c().is_zero() {
                return Err(RepError::NonzeroEvaluationPoint(s.c().clone()));
            }
        }
        Ok(HomProblem::new(
            TopSpace::from_spec(specs[0]),
            TopSpace::from_spec(specs[1]),
            TopSpace::from_spec(specs[2]),
        ))
    }
}

/// `dim Hom_{h[t]}(Ω_1, Hom(Ω_2, Ω_3))` at `c = 0`: linear maps
/// `T: Ω_1 → Hom(Ω_2, Ω_3)` with `T(H_1 u) = H_3 T(u) - T(u) H_2` for every
/// color, as a nullspace dimension. Positive powers of `t` act as 0 at
/// `c = 0`, so only the `H` matrices constrain.
pub fn intertwiner_dim(p: &HomProblem) -> Result<usize, RepError> {
    let d = [p.source.d(), p.middle.d(), p.target.d()];
    if d[0] != d[1] || d[1] != d[2] {
        return Err(RepError::MismatchedColors(d));
    }
    let (r1, r2, r3) = (p.source.r(), p.middle.r(), p.target.r());
    let var = |u: usize, b: usize, a: usize| (u * r3 + b) * r2 + a;
    let unknowns = r1 * r2 * r3;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..d[0] {
        let (h1, h2, h3) = (&p.source.h[i], &p.middle.h[i], &p.target.h[i]);
        for u in 0..r1 {
            for b in 0..r3 {
                for a in 0..r2 {
                    let mut row = vec![Rational::zero(); unknowns];
                    for u2 in 0..r1 {
                        row[var(u2, b, a)] += h1.get(u2, u);
                    }
                    for b2 in 0..r3 {
                        row[var(u, b2, a)] -= h3.get(b, b2);
                    }
                    for a2 in 0..r2 {
                        row[var(u, b, a2)] += h2.get(a2, a);
                    }
                    rows.push(row);
                }
            }
        }
    }
    let m = RatMatrix::from_rows(rows).expect("rows have equal length");
    Ok(unknowns - m.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn qq(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn evaluation_action_examples() {
        let top = TopSpace::scalar(vec![q(5)]);
        assert_eq!(
            eval_action(1, &[(0, q(1))], &top, &qq(2, 7)).unwrap(),
            RatMatrix::scalar(1, &q(5))
        );
        let top3 = TopSpace::scalar(vec![q(3)]);
        assert_eq!(
            eval_action(1, &[(2, q(1))], &top3, &qq(1, 2)).unwrap(),
            RatMatrix::scalar(1, &qq(3, 4))
        );
        let jt = TopSpace::jordan(q(1), 2, 2).unwrap();
        assert!(eval_action(1, &[(1, q(1))], &jt, &q(0)).unwrap().is_zero());
        assert!(eval_action(2, &[(0, q(1))], &jt, &q(0)).is_err());
    }

    #[test]
    fn casimir_examples() {
        assert_eq!(casimir_scalar(&[q(1), q(1)], &qq(1, 2)).unwrap(), qq(8, 3));
        assert_eq!(casimir_scalar(&[q(0)], &qq(3, 5)).unwrap(), q(0));
        assert_eq!(casimir_scalar(&[q(3)], &q(0)).unwrap(), q(9));
        assert_eq!(casimir_scalar(&[q(1)], &q(-1)), Err(RepError::UnitEvaluationPoint));
        assert_eq!(casimir_partial(&[q(1)], &qq(1, 2), 1), qq(5, 4));
        assert_eq!(casimir_partial(&[q(1)], &q(0), 9), q(1));
        assert_eq!(casimir_partial(&[q(2)], &qq(1, 3), 2), qq(364, 81));
    }

    #[test]
    fn l0_top_examples() {
        let w = ModuleSpec::evaluation(vec![q(2)], qq(1, 2), q(1)).unwrap();
        assert_eq!(l0_top_matrix(&w).unwrap(), RatMatrix::scalar(1, &qq(8, 3)));
        let nil = ModuleSpec::logarithmic(vec![RatMatrix::from_i64(&[&[0, 1], &[0, 0]])], qq(1, 5), q(3))
            .unwrap();
        assert!(l0_top_matrix(&nil).unwrap().is_zero());
        let j = ModuleSpec::logarithmic(vec![RatMatrix::from_i64(&[&[1, 1], &[0, 1]])], q(0), qq(1, 2))
            .unwrap();
        assert_eq!(l0_top_matrix(&j).unwrap(), RatMatrix::from_i64(&[&[1, 2], &[0, 1]]));
    }

    #[test]
    fn logarithmic_examples() {
        let j = ModuleSpec::logarithmic(vec![RatMatrix::from_i64(&[&[1, 1], &[0, 1]])], q(0), q(1))
            .unwrap();
        assert_eq!(is_genuine_logarithmic(&j).unwrap(), (true, vec![2]));
        let nil = ModuleSpec::logarithmic(vec![RatMatrix::from_i64(&[&[0, 1], &[0, 0]])], q(0), q(1))
            .unwrap();
        assert_eq!(is_genuine_logarithmic(&nil).unwrap(), (false, vec![1, 1]));
        let w = ModuleSpec::evaluation(vec![qq(7, 2)], qq(1, 3), q(-1)).unwrap();
        assert_eq!(is_genuine_logarithmic(&w).unwrap(), (false, vec![1]));
        assert_eq!(
            is_genuine_logarithmic(&ModuleSpec::adjoint(1, q(1)).unwrap()),
            Err(RepError::NotEvaluation)
        );
    }

    #[test]
    fn hom_examples() {
        let s = |x: i64| TopSpace::scalar(vec![q(x)]);
        assert_eq!(intertwiner_dim(&HomProblem::new(s(1), s(1), s(2))).unwrap(), 1);
        assert_eq!(intertwiner_dim(&HomProblem::new(s(1), s(1), s(3))).unwrap(), 0);
        let p = HomProblem::new(
            TopSpace::jordan(q(1), 2, 2).unwrap(),
            s(1),
            TopSpace::jordan(q(2), 2, 2).unwrap(),
        );
        assert_eq!(intertwiner_dim(&p).unwrap(), 2);
        let bad = HomProblem::new(s(1), TopSpace::scalar(vec![q(1), q(0)]), s(1));
        assert!(matches!(intertwiner_dim(&bad), Err(RepError::MismatchedColors(_))));
    }

    #[test]
    fn hom_rejects_nonzero_c() {
        let a = ModuleSpec::evaluation(vec![q(1)], qq(1, 2), q(1)).unwrap();
        let b = ModuleSpec::evaluation(vec![q(1)], q(0), q(1)).unwrap();
        assert_eq!(
            HomProblem::from_modules([&a, &b, &b]),
            Err(RepError::NonzeroEvaluationPoint(qq(1, 2)))
        );
        assert!(HomProblem::from_modules([&b, &b, &b]).is_ok());
    }

    #[test]
    fn vacuum_of_vertex_algebra_is_the_vacuum() {
        let spec = ModuleSpec::adjoint(1, q(1)).unwrap();
        let v = vacuum_space(&spec, &Truncation::new(4, 2));
        assert_eq!(v.vectors, vec![ModuleState::top_vector(0)]);
        assert_eq!(v.bigrades_scanned.len(), 15);
    }

    #[test]
    fn vacuum_of_log_module_is_the_top() {
        let spec = ModuleSpec::logarithmic(
            vec![RatMatrix::from_i64(&[&[2, 1], &[0, 2]])],
            qq(1, 3),
            qq(-1, 2),
        )
        .unwrap();
        let v = vacuum_space(&spec, &Truncation::new(3, 2));
        assert_eq!(v.dim(), 2);
        assert!(v.vectors.iter().all(|s| s.keys().all(|b| b.mono.is_one())));
    }

    #[test]
    fn jordan_top_shapes() {
        let t = TopSpace::jordan(q(3), 4, 2).unwrap();
        assert_eq!(t.h()[0].jordan_structure(&q(3)).unwrap(), vec![2, 2]);
        assert!(TopSpace::jordan(q(3), 3, 2).is_err());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-6i64..7, 1i64..5).prop_map(|(n, d)| qq(n, d))
    }

    /// One-color top: `λ` plus a strictly upper-triangular part.
    fn arb_top(max_r: usize) -> impl Strategy<Value = TopSpace> {
        (1..=max_r, -2i64..3, proptest::collection::vec(-1i64..2, 6)).prop_map(|(r, lam, upper)| {
            let mut m = RatMatrix::scalar(r, &q(lam));
            let mut it = upper.into_iter();
            for i in 0..r {
                for j in i + 1..r {
                    m.set(i, j, q(it.next().unwrap_or(0)));
                }
            }
            TopSpace::new(vec![m]).unwrap()
        })
    }

    proptest! {
        #[test]
        fn casimir_partial_is_geometric(
            lambda in proptest::collection::vec(arb_rational(), 1..4),
            c in arb_rational(),
            cutoff in 0u32..12,
        ) {
            let c2 = &c * &c;
            prop_assume!(c2 != q(1));
            let nrm: Rational = lambda.iter().map(|x| x * x).sum();
            let partial = casimir_partial(&lambda, &c, cutoff);
            let closed = &nrm * &(q(1) - c2.pow(cutoff as i32 + 1)) / (q(1) - &c2);
            prop_assert_eq!(&partial, &closed);
            let tail = &nrm * &c2.pow(cutoff as i32 + 1) / (q(1) - &c2);
            prop_assert_eq!(casimir_scalar(&lambda, &c).unwrap() - partial, tail);
        }

        #[test]
        fn genuine_iff_square_sum_has_big_block(top in arb_top(3), c in arb_rational(), l in arb_rational()) {
            prop_assume!(&c * &c != q(1) && !l.is_zero());
            let spec = top.induce(c, l).unwrap();
            let (flag, blocks) = is_genuine_logarithmic(&spec).unwrap();
            let sq = spec.h_square_sum().jordan_structure(&spec.lambda_norm()).unwrap();
            prop_assert_eq!(flag, sq.iter().any(|&b| b >= 2));
            prop_assert_eq!(blocks, sq);
        }

        #[test]
        fn hom_dimension_symmetries(a in arb_top(2), b in arb_top(2), c in arb_top(2)) {
            let base = intertwiner_dim(&HomProblem::new(a.clone(), b.clone(), c.clone())).unwrap();
            let swapped = intertwiner_dim(&HomProblem::new(b.clone(), a.clone(), c.clone())).unwrap();
            let dualized = intertwiner_dim(&HomProblem::new(a, c.dual(), b.dual())).unwrap();
            prop_assert_eq!(base, swapped);
            prop_assert_eq!(base, dualized);
        }
    }
}
