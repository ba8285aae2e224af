use super::VertexError;
use crate::exactmath::{binomial, Rational};
use crate::fock::{apply_mode, Factor, FockError, FockState, ModeOp, ModuleSpec, ModuleState};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Annihilate,
    Zero,
    Create,
}

/// The coefficient of `z^{-k-1}` in `Y_W(v, z) w`.
///
/// A factor `x_{ijn}` of `v` contributes the field
/// `(1/(n-1)!) ∂^{n-1} a(z) = Σ_m C(-m-1, n-1) a(m) z^{-m-n}`, so the modes
/// `m_r` of a term satisfy `Σ m_r = k + 1 - wt(v)`. Each factor is assigned
/// to the annihilation, zero or creation part of the normal-ordered product;
/// annihilation modes only range over variables present in the state, and
/// the creation modes then split the remaining total into negative parts.
pub fn vertex_mode(
    v: &FockState,
    k: i64,
    w: &ModuleState,
    spec: &ModuleSpec,
) -> Result<ModuleState, VertexError> {
    let mut out = ModuleState::zero();
    for (mono, coeff) in v.iter() {
        for f in mono.factors() {
            if f.color == 0 || f.color as usize > spec.d() {
                return Err(FockError::ColorOutOfRange {
                    color: f.color,
                    d: spec.d(),
                }
                .into());
            }
        }
        let total = k + 1 - mono.weight() as i64;
        let factors = mono.factors();
        let mut slots = vec![Slot::Annihilate; factors.len()];
        let term = monomial_field(factors, &mut slots, 0, total, w, spec);
        out.add_scaled(&term, coeff);
    }
    Ok(out)
}

fn monomial_field(
    factors: &[Factor],
    slots: &mut Vec<Slot>,
    at: usize,
    total: i64,
    w: &ModuleState,
    spec: &ModuleSpec,
) -> ModuleState {
    if at == factors.len() {
        return evaluate_assignment(factors, slots, total, w, spec);
    }
    let mut out = ModuleState::zero();
    for slot in [Slot::Annihilate, Slot::Zero, Slot::Create] {
        if slot == Slot::Zero && spec.zero_modes_vanish() {
            continue;
        }
        slots[at] = slot;
        out.add_assign(&monomial_field(factors, slots, at + 1, total, w, spec));
    }
    out
}

fn evaluate_assignment(
    factors: &[Factor],
    slots: &[Slot],
    total: i64,
    w: &ModuleState,
    spec: &ModuleSpec,
) -> ModuleState {
    let ann: Vec<Factor> = pick(factors, slots, Slot::Annihilate);
    let zero: Vec<Factor> = pick(factors, slots, Slot::Zero);
    let cre: Vec<Factor> = pick(factors, slots, Slot::Create);

    // Annihilation part first (rightmost), branching on the consumed mode.
    let mut branches: Vec<(i64, ModuleState)> = vec![(0, w.clone())];
    for f in &ann {
        let mut next = Vec::new();
        for (used, state) in &branches {
            let mut modes: Vec<u32> = state
                .keys()
                .flat_map(|b| b.mono.modes_of(f.gen()).collect::<Vec<_>>())
                .collect();
            modes.sort_unstable();
            modes.dedup();
            for m in modes {
                let m = m as i64;
                let weight = binomial(-m - 1, f.mode - 1);
                let s = apply(f, m, state, spec).scaled(&weight);
                if !s.is_zero() {
                    next.push((used + m, s));
                }
            }
        }
        branches = next;
        if branches.is_empty() {
            return ModuleState::zero();
        }
    }

    let mut out = ModuleState::zero();
    for (used, mut state) in branches {
        for f in &zero {
            // C(-1, n-1) = (-1)^{n-1}
            state = apply(f, 0, &state, spec).scaled(&binomial(-1, f.mode - 1));
        }
        let remaining = total - used;
        if cre.is_empty() {
            if remaining == 0 {
                out.add_assign(&state);
            }
            continue;
        }
        // every creation mode is <= -1
        let budget = -remaining;
        if budget < cre.len() as i64 {
            continue;
        }
        let mut parts = vec![0i64; cre.len()];
        compositions(&cre, &mut parts, 0, budget, &state, spec, &mut out);
    }
    out
}

fn compositions(
    cre: &[Factor],
    parts: &mut Vec<i64>,
    at: usize,
    budget: i64,
    state: &ModuleState,
    spec: &ModuleSpec,
    out: &mut ModuleState,
) {
    if at + 1 == cre.len() {
        parts[at] = budget;
        let mut s = state.clone();
        let mut weight = Rational::one();
        for (f, &p) in cre.iter().zip(parts.iter()) {
            let m = -p;
            weight = weight * binomial(-m - 1, f.mode - 1);
            s = apply(f, m, &s, spec);
        }
        out.add_scaled(&s, &weight);
        return;
    }
    let rest = (cre.len() - at - 1) as i64;
    for p in 1..=budget - rest {
        parts[at] = p;
        compositions(cre, parts, at + 1, budget - p, state, spec, out);
    }
}

fn pick(factors: &[Factor], slots: &[Slot], which: Slot) -> Vec<Factor> {
    factors
        .iter()
        .zip(slots)
        .filter(|(_, s)| **s == which)
        .map(|(f, _)| *f)
        .collect()
}

fn apply(f: &Factor, m: i64, state: &ModuleState, spec: &ModuleSpec) -> ModuleState {
    apply_mode(ModeOp::new(f.gen(), m), state, spec).expect("colors validated by vertex_mode")
}
