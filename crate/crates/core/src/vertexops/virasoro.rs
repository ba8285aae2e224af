use super::{Truncation, VertexError};
use crate::exactmath::Rational;
use crate::fock::{
    apply_mode, BasisVector, Factor, FockState, GenIndex, ModeOp, ModuleSpec, ModuleState,
    SpecError,
};

/// Whether `l_apply(n, ·, spec, ·)` is an exact (untruncated) computation.
///
/// Only `L(-1)` on a module with a nonvanishing zero-mode action and `c != 0`
/// has an infinite sum, `Σ_j c^j x_{i,j,1} H_i`.
pub fn l_is_exact(n: i64, spec: &ModuleSpec) -> bool {
    n != -1 || spec.zero_modes_vanish() || spec.c().is_zero()
}

/// `L(n) w` for `n >= -1`, with a flag telling whether the result is exact.
///
/// The normal-ordered quadratic sum splits into
/// * pairs of annihilation modes (`n >= 2`),
/// * a creation mode times an annihilation mode, which only sees variables
///   present in `w`,
/// * zero-mode terms: `(1/(2l(1-c^2))) Σ H_i^2` for `n = 0`,
///   `(1/l) Σ a(n) a(0)` for `n >= 1` and `(1/l) Σ_j c^j x_{i,j,1} H_i` for
///   `n = -1` (cut at `j <= tr.j_max` when `c != 0`).
pub fn l_apply(
    n: i64,
    w: &ModuleState,
    spec: &ModuleSpec,
    tr: &Truncation,
) -> Result<(ModuleState, bool), VertexError> {
    if n < -1 {
        return Err(VertexError::VirasoroIndex(n));
    }
    if spec.has_divergent_tail() {
        return Err(SpecError::UnitEvaluationPoint.into());
    }
    let half_inv = (Rational::from_integer(2) * spec.level()).recip();
    let inv = spec.level().recip();
    let mut out = ModuleState::zero();
    for (b, coeff) in w.iter() {
        let single = ModuleState::basis(b.clone());
        let mut gens: Vec<GenIndex> = b.mono.factors().iter().map(Factor::gen).collect();
        gens.dedup();
        for &g in &gens {
            for m in 1..n {
                let t = mode(g, n - m, &mode(g, m, &single, spec), spec);
                out.add_scaled(&t, &(coeff * &half_inv));
            }
            let modes: Vec<u32> = b.mono.modes_of(g).collect();
            for q in modes {
                let q = q as i64;
                if q <= n {
                    continue;
                }
                let t = mode(g, n - q, &mode(g, q, &single, spec), spec);
                out.add_scaled(&t, &(coeff * &inv));
            }
            if n >= 1 && !spec.zero_modes_vanish() && b.mono.modes_of(g).any(|q| q as i64 == n) {
                let t = mode(g, 0, &mode(g, n, &single, spec), spec);
                out.add_scaled(&t, &(coeff * &inv));
            }
        }
    }
    let mut exact = true;
    if !spec.zero_modes_vanish() {
        match n {
            0 => {
                let geom = (Rational::one() - spec.c() * spec.c()).recip();
                let tail = spec.h_square_sum().scale(&(&half_inv * &geom));
                for (b, coeff) in w.iter() {
                    for row in 0..tail.rows() {
                        let e = tail.get(row, b.top);
                        if !e.is_zero() {
                            out.add_term(BasisVector::new(b.mono.clone(), row), coeff * e);
                        }
                    }
                }
            }
            -1 => {
                let j_top = if spec.c().is_zero() {
                    0
                } else {
                    exact = false;
                    tr.j_max
                };
                for color in 1..=spec.d() as u32 {
                    for j in 0..=j_top {
                        let g = GenIndex::new(color, j);
                        let t = mode(g, -1, &mode(g, 0, w, spec), spec);
                        out.add_scaled(&t, &inv);
                    }
                }
            }
            _ => {}
        }
    }
    Ok((out, exact))
}

fn mode(g: GenIndex, n: i64, w: &ModuleState, spec: &ModuleSpec) -> ModuleState {
    apply_mode(ModeOp::new(g, n), w, spec).expect("generator taken from a valid state")
}

/// `L(n)` on an element of `M(l)` itself (always exact).
pub fn l_apply_fock(n: i64, v: &FockState, d: usize, level: &Rational) -> Result<FockState, VertexError> {
    let spec = ModuleSpec::adjoint(d, level.clone())?;
    let (out, _) = l_apply(n, &v.to_module(), &spec, &Truncation::new(0, 0))?;
    Ok(out.to_fock())
}

/// The translation operator of `M(l)`: the derivation `x_{ijn} ↦ n x_{i,j,n+1}`.
pub fn d_apply(v: &FockState) -> FockState {
    let mut out = FockState::zero();
    for (mono, coeff) in v.iter() {
        let factors = mono.factors();
        let mut i = 0;
        while i < factors.len() {
            let f = factors[i];
            let mult = factors[i..].iter().take_while(|x| **x == f).count();
            let (rest, _) = mono.without(&f).expect("factor is present");
            let raised = rest.times(Factor::new(f.color, f.power, f.mode + 1));
            let k = Rational::from_integer((mult as i64) * f.mode as i64);
            out.add_term(raised, coeff * &k);
            i += mult;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use crate::exactmath::RatMatrix;
    use crate::fock::module_basis;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn l0_is_total_mode() {
        let spec = ModuleSpec::adjoint(1, q(1, 1)).unwrap();
        let v = FockState::monomial(&[(1, 0, 1), (1, 2, 3)]).to_module();
        let (out, exact) = l_apply(0, &v, &spec, &Truncation::new(0, 0)).unwrap();
        assert!(exact);
        assert_eq!(out, v.scaled(&q(4, 1)));
    }

    #[test]
    fn l1_kills_vacuum() {
        let spec = ModuleSpec::adjoint(1, q(1, 1)).unwrap();
        let (out, exact) = l_apply(1, &ModuleState::top_vector(0), &spec, &Truncation::new(0, 0)).unwrap();
        assert!(exact && out.is_zero());
    }

    #[test]
    fn l0_on_evaluation_top() {
        let spec = ModuleSpec::evaluation(vec![q(2, 1)], q(1, 2), q(1, 1)).unwrap();
        let top = ModuleState::top_vector(0);
        let (out, exact) = l_apply(0, &top, &spec, &Truncation::new(0, 0)).unwrap();
        assert!(exact);
        assert_eq!(out, top.scaled(&q(8, 3)));
    }

    #[test]
    fn lminus1_tail_is_flagged() {
        let spec = ModuleSpec::evaluation(vec![q(1, 1)], q(1, 2), q(1, 1)).unwrap();
        let top = ModuleState::top_vector(0);
        let tr = Truncation::new(0, 0).with_j_max(3);
        let (out, exact) = l_apply(-1, &top, &spec, &tr).unwrap();
        assert!(!exact);
        // Σ_{j<=3} c^j x_{1,j,1}
        let mut expected = ModuleState::zero();
        for j in 0..=3u32 {
            expected.add_term(
                BasisVector::new(crate::fock::Monomial::from_factors(vec![Factor::new(1, j, 1)]), 0),
                q(1, 2).pow(j as i32),
            );
        }
        assert_eq!(out, expected);

        let at_zero = ModuleSpec::evaluation(vec![q(1, 1)], q(0, 1), q(1, 1)).unwrap();
        assert!(l_apply(-1, &top, &at_zero, &tr).unwrap().1);
    }

    #[test]
    fn unit_evaluation_point_is_rejected() {
        let spec = ModuleSpec::evaluation(vec![q(1, 1)], q(-1, 1), q(1, 1)).unwrap();
        let e = l_apply(0, &ModuleState::top_vector(0), &spec, &Truncation::new(0, 0));
        assert_eq!(e, Err(VertexError::Spec(SpecError::UnitEvaluationPoint)));
        let trivial = ModuleSpec::evaluation(vec![q(0, 1)], q(1, 1), q(1, 1)).unwrap();
        assert!(l_apply(0, &ModuleState::top_vector(0), &trivial, &Truncation::new(0, 0)).is_ok());
    }

    #[test]
    fn rejects_low_index() {
        let spec = ModuleSpec::adjoint(1, q(1, 1)).unwrap();
        assert_eq!(
            l_apply(-2, &ModuleState::top_vector(0), &spec, &Truncation::new(0, 0)),
            Err(VertexError::VirasoroIndex(-2))
        );
    }

    #[test]
    fn translation_examples() {
        assert!(d_apply(&FockState::vacuum()).is_zero());
        assert_eq!(
            d_apply(&FockState::monomial(&[(1, 0, 1)])),
            FockState::monomial(&[(1, 0, 2)])
        );
        assert_eq!(
            d_apply(&FockState::monomial(&[(1, 0, 2)])),
            FockState::monomial(&[(1, 0, 3)]).scaled(&q(2, 1))
        );
        // Leibniz on a square: D(x1^2) = 2 x1 x2
        assert_eq!(
            d_apply(&FockState::monomial(&[(1, 0, 1), (1, 0, 1)])),
            FockState::monomial(&[(1, 0, 1), (1, 0, 2)]).scaled(&q(2, 1))
        );
    }

    #[test]
    fn lminus1_matches_translation_on_small_basis() {
        for level in [q(1, 1), q(-2, 3)] {
            let spec = ModuleSpec::adjoint(2, level.clone()).unwrap();
            for b in module_basis(2, 1, 4, 2) {
                let v = FockState::basis(b.mono.clone());
                let (l, _) = l_apply(-1, &v.to_module(), &spec, &Truncation::new(0, 0)).unwrap();
                assert_eq!(l.to_fock(), d_apply(&v));
            }
        }
    }

    #[test]
    fn l0_on_log_top_has_jordan_block() {
        let spec = ModuleSpec::logarithmic(
            vec![RatMatrix::from_i64(&[&[1, 1], &[0, 1]])],
            q(0, 1),
            q(1, 2),
        )
        .unwrap();
        let (out, _) = l_apply(0, &ModuleState::top_vector(1), &spec, &Truncation::new(0, 0)).unwrap();
        // H^2 = [[1,2],[0,1]], 1/(2l) = 1
        let mut expected = ModuleState::zero();
        expected.add_term(BasisVector::top(0), q(2, 1));
        expected.add_term(BasisVector::top(1), q(1, 1));
        assert_eq!(out, expected);
    }

    proptest! {
        #[test]
        fn lminus1_is_translation_on_random_states(
            picks in proptest::collection::vec((0usize..200, -3i64..4), 1..5),
            level_num in prop::sample::select(vec![1i64, -2, 3]),
        ) {
            let level = q(level_num, 2);
            let basis = module_basis(2, 1, 4, 2);
            let mut v = FockState::zero();
            for (ix, c) in picks {
                v.add_term(basis[ix % basis.len()].mono.clone(), q(c, 1));
            }
            let spec = ModuleSpec::adjoint(2, level).unwrap();
            let (l, exact) = l_apply(-1, &v.to_module(), &spec, &Truncation::new(0, 0)).unwrap();
            prop_assert!(exact);
            prop_assert_eq!(l.to_fock(), d_apply(&v));
        }

        #[test]
        fn low_virasoro_modes_keep_n_weight(ix in 0usize..200, j in -1i64..=1) {
            let spec = ModuleSpec::adjoint(2, q(2, 3)).unwrap();
            let basis = module_basis(2, 1, 4, 3);
            let b = basis[ix % basis.len()].clone();
            let (out, _) = l_apply(j, &ModuleState::basis(b.clone()), &spec, &Truncation::new(0, 0)).unwrap();
            for key in out.keys() {
                prop_assert_eq!(key.mono.nweight(), b.mono.nweight());
            }
        }

        #[test]
        fn higher_virasoro_modes_never_raise_n_weight(ix in 0usize..200, j in 2i64..5) {
            let spec = ModuleSpec::adjoint(2, q(2, 3)).unwrap();
            let basis = module_basis(2, 1, 4, 3);
            let b = basis[ix % basis.len()].clone();
            let (out, _) = l_apply(j, &ModuleState::basis(b.clone()), &spec, &Truncation::new(0, 0)).unwrap();
            for key in out.keys() {
                prop_assert!(key.mono.nweight() <= b.mono.nweight());
            }
        }
    }
}
