use super::{l_apply_fock, vertex_mode, Truncation, VertexError};
use crate::exactmath::{RatMatrix, Rational};
use crate::fock::{module_basis, BasisVector, FockState, ModuleKind, ModuleSpec, ModuleState, SpecError};

/// The matrix of the adjoint mode `v_n` on the truncated graded dual, in the
/// basis dual to `basis`: column `a` is the image of the dual vector `e_a^*`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualModeMatrix {
    pub basis: Vec<BasisVector>,
    pub matrix: RatMatrix,
}

fn check_integral_spectrum(spec: &ModuleSpec) -> Result<(), VertexError> {
    if spec.kind() == ModuleKind::Adjoint || spec.zero_modes_vanish() {
        return Ok(());
    }
    if spec.has_divergent_tail() {
        return Err(SpecError::UnitEvaluationPoint.into());
    }
    // the top-space L(0) has the single eigenvalue ⟨λ,λ⟩ / (2l(1 - c^2))
    let eig = spec.lambda_norm()
        * (Rational::from_integer(2) * spec.level() * (Rational::one() - spec.c() * spec.c())).recip();
    if eig.is_integer() {
        Ok(())
    } else {
        Err(VertexError::NonIntegerSpectrum)
    }
}

/// `v_n^*`, the operator on `W` whose transpose is the mode `v_n` of
/// `Y'(v, z)`:
/// `v_n^* = (-1)^{wt v} Σ_p (1/p!) (L(1)^p v)_{2 wt v - p - n - 2}`,
/// the coefficient of `z^{-n-1}` in `Y(e^{zL(1)} (-z^{-2})^{L(0)} v, z^{-1})`.
pub fn adjoint_mode_apply(
    v: &FockState,
    n: i64,
    w: &ModuleState,
    spec: &ModuleSpec,
) -> Result<ModuleState, VertexError> {
    check_integral_spectrum(spec)?;
    if v.is_zero() {
        return Ok(ModuleState::zero());
    }
    let wt = v.grading()?.wt_shift as i64;
    let sign = if wt % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    let mut out = ModuleState::zero();
    let mut lifted = v.clone();
    let mut factorial = Rational::one();
    for p in 0..=wt {
        if lifted.is_zero() {
            break;
        }
        if p > 0 {
            factorial = factorial * Rational::from_integer(p);
        }
        let mode = 2 * wt - p - n - 2;
        let term = vertex_mode(&lifted, mode, w, spec)?;
        out.add_scaled(&term, &(&sign * &factorial.recip()));
        lifted = l_apply_fock(1, &lifted, spec.d(), spec.level())?;
    }
    Ok(out)
}

/// Matrix of the contragredient mode `v_n` on the dual of the truncated
/// module (all basis states with weight above the top `<= tr.max_wt` and
/// N-weight `<= tr.max_nwt`). Entries pairing with states outside the
/// truncation are dropped.
pub fn adjoint_mode_matrix(
    v: &FockState,
    n: i64,
    spec: &ModuleSpec,
    tr: &Truncation,
) -> Result<DualModeMatrix, VertexError> {
    check_integral_spectrum(spec)?;
    if !v.is_zero() {
        v.grading()?;
    }
    let basis = module_basis(spec.d(), spec.r(), tr.max_wt, tr.max_nwt);
    let index: std::collections::BTreeMap<&BasisVector, usize> =
        basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let size = basis.len();
    let mut matrix = RatMatrix::zeros(size, size);
    for (col_b, b) in basis.iter().enumerate() {
        let image = adjoint_mode_apply(v, n, &ModuleState::basis(b.clone()), spec)?;
        for (key, c) in image.iter() {
            if let Some(&a) = index.get(key) {
                // v_n^* e_b has e_a-coefficient c, so v_n e_a^* has e_b^*-coefficient c
                matrix.set(col_b, a, c.clone());
            }
        }
    }
    Ok(DualModeMatrix { basis, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{apply_mode, GenIndex, ModeOp};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn generator_adjoint_is_negated_opposite_mode() {
        let spec = ModuleSpec::adjoint(1, q(1)).unwrap();
        let v = FockState::monomial(&[(1, 0, 1)]);
        for b in module_basis(1, 1, 3, 1) {
            let w = ModuleState::basis(b);
            for n in -3..=3 {
                let got = adjoint_mode_apply(&v, n, &w, &spec).unwrap();
                let expected = apply_mode(ModeOp::new(GenIndex::new(1, 0), -n), &w, &spec)
                    .unwrap()
                    .scaled(&q(-1));
                assert_eq!(got, expected);
            }
        }
    }

    #[test]
    fn vacuum_gives_identity() {
        let spec = ModuleSpec::adjoint(1, q(2)).unwrap();
        let m = adjoint_mode_matrix(&FockState::vacuum(), -1, &spec, &Truncation::new(3, 1)).unwrap();
        assert_eq!(m.matrix, RatMatrix::identity(m.basis.len()));
    }

    #[test]
    fn weight_shift_is_opposite() {
        let spec = ModuleSpec::adjoint(1, q(1)).unwrap();
        let v = FockState::monomial(&[(1, 1, 1), (1, 0, 2)]);
        let wt = 3i64;
        for n in -2..=3 {
            let m = adjoint_mode_matrix(&v, n, &spec, &Truncation::new(4, 2)).unwrap();
            for a in 0..m.basis.len() {
                for b in 0..m.basis.len() {
                    if m.matrix.get(b, a).is_zero() {
                        continue;
                    }
                    let (wa, wb) = (m.basis[a].mono.weight() as i64, m.basis[b].mono.weight() as i64);
                    assert_eq!(wb, wa + wt - n - 1);
                }
            }
        }
    }

    #[test]
    fn rejects_non_integral_spectrum() {
        let spec = ModuleSpec::evaluation(vec![q(1)], q(0), q(1)).unwrap();
        let e = adjoint_mode_matrix(&FockState::vacuum(), 0, &spec, &Truncation::new(1, 0));
        assert_eq!(e, Err(VertexError::NonIntegerSpectrum));
        let ok = ModuleSpec::evaluation(vec![q(2)], q(0), q(1)).unwrap();
        assert!(adjoint_mode_matrix(&FockState::vacuum(), 0, &ok, &Truncation::new(1, 0)).is_ok());
    }

    #[test]
    fn rejects_inhomogeneous() {
        let spec = ModuleSpec::adjoint(1, q(1)).unwrap();
        let mut v = FockState::monomial(&[(1, 0, 1)]);
        v.add_assign(&FockState::monomial(&[(1, 0, 2)]));
        assert!(adjoint_mode_matrix(&v, 0, &spec, &Truncation::new(1, 0)).is_err());
    }
}
