use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{d_apply, l_apply, l_apply_fock, l_is_exact, vertex_mode, Truncation, VertexError};
use crate::exactmath::{binomial, Rational};
use crate::fock::{
    apply_mode, module_basis, BasisVector, FockError, FockState, GenIndex, ModeOp, ModuleSpec,
    ModuleState,
};

/// Outcome of an identity sweep over a truncated basis.
///
/// `counterexample` is the first basis state (in sweep order) on which the
/// defect is nonzero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub identity: String,
    pub params: Value,
    pub states_checked: usize,
    pub defect_zero: bool,
    pub max_defect: Rational,
    pub counterexample: Option<ModuleState>,
    pub truncated: bool,
}

impl CheckReport {
    /// Combines reports of several sweeps of the same identity.
    pub fn merge(identity: &str, params: Value, reports: Vec<CheckReport>) -> CheckReport {
        let mut out = CheckReport {
            identity: identity.to_string(),
            params,
            states_checked: 0,
            defect_zero: true,
            max_defect: Rational::zero(),
            counterexample: None,
            truncated: false,
        };
        for r in reports {
            out.states_checked += r.states_checked;
            out.truncated |= r.truncated;
            if r.max_defect > out.max_defect {
                out.max_defect = r.max_defect;
            }
            if !r.defect_zero && out.defect_zero {
                out.defect_zero = false;
                out.counterexample = r.counterexample;
            }
        }
        out
    }
}

/// Runs `defect` on every basis vector within `tr` (in parallel) and
/// summarizes. `defect` returns the defect vector and whether it was exact.
pub fn sweep_basis<F>(
    identity: &str,
    params: Value,
    spec: &ModuleSpec,
    tr: &Truncation,
    defect: F,
) -> Result<CheckReport, VertexError>
where
    F: Fn(&ModuleState) -> Result<(ModuleState, bool), VertexError> + Sync,
{
    let basis = module_basis(spec.d(), spec.r(), tr.max_wt, tr.max_nwt);
    sweep_states(identity, params, &basis, defect)
}

pub(crate) fn sweep_states<F>(
    identity: &str,
    params: Value,
    basis: &[BasisVector],
    defect: F,
) -> Result<CheckReport, VertexError>
where
    F: Fn(&ModuleState) -> Result<(ModuleState, bool), VertexError> + Sync,
{
    let results: Vec<(ModuleState, bool)> = basis
        .par_iter()
        .map(|b| defect(&ModuleState::basis(b.clone())))
        .collect::<Result<_, _>>()?;
    let mut report = CheckReport {
        identity: identity.to_string(),
        params,
        states_checked: basis.len(),
        defect_zero: true,
        max_defect: Rational::zero(),
        counterexample: None,
        truncated: false,
    };
    for (b, (d, exact)) in basis.iter().zip(results) {
        report.truncated |= !exact;
        if d.is_zero() {
            continue;
        }
        let m = d.max_abs_coeff();
        if m > report.max_defect {
            report.max_defect = m;
        }
        if report.defect_zero {
            report.defect_zero = false;
            report.counterexample = Some(ModuleState::basis(b.clone()));
        }
    }
    Ok(report)
}

pub(crate) fn spec_params(spec: &ModuleSpec, tr: &Truncation) -> Value {
    json!({
        "module": spec,
        "max_wt": tr.max_wt,
        "max_nwt": tr.max_nwt,
        "j_max": tr.j_max,
    })
}

pub(crate) fn with(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn check_color(gen: GenIndex, spec: &ModuleSpec) -> Result<(), VertexError> {
    if gen.color == 0 || gen.color as usize > spec.d() {
        return Err(FockError::ColorOutOfRange {
            color: gen.color,
            d: spec.d(),
        }
        .into());
    }
    Ok(())
}

/// `[L(n), a(k)] = -k a(n+k)` on every basis state within `tr`.
pub fn check_l_mode_commutator(
    n: i64,
    gen: GenIndex,
    k: i64,
    spec: &ModuleSpec,
    tr: &Truncation,
) -> Result<CheckReport, VertexError> {
    check_color(gen, spec)?;
    let params = with(
        spec_params(spec, tr),
        json!({"n": n, "gen": [gen.color, gen.power], "k": k}),
    );
    sweep_basis("e1", params, spec, tr, |w| {
        let a = |x: &ModuleState, m: i64| apply_mode(ModeOp::new(gen, m), x, spec);
        let (l_aw, e1) = l_apply(n, &a(w, k)?, spec, tr)?;
        let (lw, e2) = l_apply(n, w, spec, tr)?;
        let mut d = l_aw.sub(&a(&lw, k)?);
        d.add_scaled(&a(w, n + k)?, &Rational::from_integer(k));
        Ok((d, e1 && e2))
    })
}

/// `[L(m), L(n)] = (m - n) L(m + n)` on every basis state within `tr`.
pub fn check_virasoro(
    m: i64,
    n: i64,
    spec: &ModuleSpec,
    tr: &Truncation,
) -> Result<CheckReport, VertexError> {
    if m < -1 || n < -1 {
        return Err(VertexError::VirasoroIndex(m.min(n)));
    }
    let params = with(spec_params(spec, tr), json!({"m": m, "n": n}));
    sweep_basis("virasoro", params, spec, tr, |w| {
        let (lnw, e1) = l_apply(n, w, spec, tr)?;
        let (lmlnw, e2) = l_apply(m, &lnw, spec, tr)?;
        let (lmw, e3) = l_apply(m, w, spec, tr)?;
        let (lnlmw, e4) = l_apply(n, &lmw, spec, tr)?;
        let mut d = lmlnw.sub(&lnlmw);
        let mut exact = e1 && e2 && e3 && e4;
        if m != n {
            let (l, e5) = l_apply(m + n, w, spec, tr)?;
            d.add_scaled(&l, &Rational::from_integer(n - m));
            exact &= e5;
        }
        Ok((d, exact))
    })
}

/// `[L(n), A_k] = Σ_{m=-1}^{n} C(n+1, m+1) (L(m)A)_{k+n-m}` on every basis
/// state within `tr`; `L(m)A` is computed in `M(l)`.
pub fn check_field_commutator(
    n: i64,
    a: &FockState,
    k: i64,
    spec: &ModuleSpec,
    tr: &Truncation,
) -> Result<CheckReport, VertexError> {
    if n < -1 {
        return Err(VertexError::VirasoroIndex(n));
    }
    if !a.is_zero() {
        a.grading()?;
    }
    let rhs_fields: Vec<(Rational, FockState, i64)> = (-1..=n)
        .map(|m| {
            let la = l_apply_fock(m, a, spec.d(), spec.level())?;
            Ok((binomial(n + 1, (m + 1) as u32), la, k + n - m))
        })
        .collect::<Result<_, VertexError>>()?;
    let params = with(
        spec_params(spec, tr),
        json!({"n": n, "k": k, "A": a}),
    );
    sweep_basis("field-commutator", params, spec, tr, |w| {
        let (l_aw, e1) = l_apply(n, &vertex_mode(a, k, w, spec)?, spec, tr)?;
        let (lw, e2) = l_apply(n, w, spec, tr)?;
        let mut d = l_aw.sub(&vertex_mode(a, k, &lw, spec)?);
        for (coeff, la, mode) in &rhs_fields {
            d.add_scaled(&vertex_mode(la, *mode, w, spec)?, &-coeff);
        }
        Ok((d, e1 && e2))
    })
}

/// On every basis state within `tr`: `L(0)` acts as the weight above the top
/// plus the top-space matrix, and `L(j)` preserves the N-weight for
/// `j` in `j_range`.
pub fn check_l0_grading(
    spec: &ModuleSpec,
    tr: &Truncation,
    j_range: std::ops::RangeInclusive<i64>,
) -> Result<CheckReport, VertexError> {
    let top = if spec.zero_modes_vanish() {
        None
    } else {
        let geom = (Rational::one() - spec.c() * spec.c()).recip();
        let half_inv = (Rational::from_integer(2) * spec.level()).recip();
        Some(spec.h_square_sum().scale(&(half_inv * geom)))
    };
    let params = with(
        spec_params(spec, tr),
        json!({"j_min": j_range.start(), "j_max_mode": j_range.end()}),
    );
    sweep_basis("l0-grading", params, spec, tr, |w| {
        let (b, _) = w.iter().next().expect("basis state");
        let (l0, e0) = l_apply(0, w, spec, tr)?;
        let mut expected = w.scaled(&Rational::from_integer(b.mono.weight() as i64));
        if let Some(t) = &top {
            for row in 0..t.rows() {
                expected.add_term(
                    BasisVector::new(b.mono.clone(), row),
                    t.get(row, b.top).clone(),
                );
            }
        }
        let mut d = l0.sub(&expected);
        let mut exact = e0;
        for j in j_range.clone() {
            if !l_is_exact(j, spec) {
                continue;
            }
            let (lj, ej) = l_apply(j, w, spec, tr)?;
            exact &= ej;
            // components that leave the N-weight of w are defects
            for (key, c) in lj.iter() {
                if key.mono.nweight() != b.mono.nweight() {
                    d.add_term(key.clone(), c.clone());
                }
            }
        }
        Ok((d, exact))
    })
}

/// `L(-1) = D` on every basis state of `M(l)` within `tr`.
pub fn check_d_equals_lminus1(d: usize, level: &Rational, tr: &Truncation) -> Result<CheckReport, VertexError> {
    let spec = ModuleSpec::adjoint(d, level.clone())?;
    let params = spec_params(&spec, tr);
    sweep_basis("d-equals-lminus1", params, &spec, tr, |w| {
        let (l, exact) = l_apply(-1, w, &spec, tr)?;
        Ok((l.sub(&d_apply(&w.to_fock()).to_module()), exact))
    })
}
