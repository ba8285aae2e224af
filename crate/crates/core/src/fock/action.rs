use super::{BasisVector, FockError, FockState, ModeOp, ModuleSpec, ModuleState, Monomial};
use crate::exactmath::Rational;

/// The double grading of a homogeneous state: weight above the top space
/// (sum of modes) and N-weight (sum of `t`-powers).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grading {
    pub wt_shift: u64,
    pub nwt: u64,
}

pub fn grading<'a, I>(monomials: I) -> Result<Grading, FockError>
where
    I: IntoIterator<Item = &'a Monomial>,
{
    let mut seen: Option<Grading> = None;
    for m in monomials {
        let g = Grading {
            wt_shift: m.weight(),
            nwt: m.nweight(),
        };
        match seen {
            None => seen = Some(g),
            Some(prev) if prev != g => return Err(FockError::NotHomogeneous),
            _ => {}
        }
    }
    seen.ok_or(FockError::ZeroState)
}

impl FockState {
    pub fn grading(&self) -> Result<Grading, FockError> {
        grading(self.keys())
    }
}

impl ModuleState {
    pub fn grading(&self) -> Result<Grading, FockError> {
        grading(self.keys().map(|b| &b.mono))
    }
}

/// Applies the single mode `op` to `w`:
/// creation modes multiply by `x_{i,j,-n}`, annihilation modes act as
/// `n l ∂/∂x_{ijn}`, and zero modes act as `c^j H_i` on the top index.
pub fn apply_mode(op: ModeOp, w: &ModuleState, spec: &ModuleSpec) -> Result<ModuleState, FockError> {
    let color = op.gen.color;
    if color == 0 || color as usize > spec.d() {
        return Err(FockError::ColorOutOfRange { color, d: spec.d() });
    }
    Ok(apply_mode_unchecked(op, w, spec))
}

pub(crate) fn apply_mode_unchecked(op: ModeOp, w: &ModuleState, spec: &ModuleSpec) -> ModuleState {
    let mut out = ModuleState::zero();
    match op.mode {
        n if n < 0 => {
            let f = super::Factor::new(op.gen.color, op.gen.power, (-n) as u32);
            for (b, c) in w.iter() {
                out.add_term(BasisVector::new(b.mono.times(f), b.top), c.clone());
            }
        }
        n if n > 0 => {
            let f = super::Factor::new(op.gen.color, op.gen.power, n as u32);
            let base = Rational::from_integer(n) * spec.level();
            for (b, c) in w.iter() {
                if let Some((rest, mult)) = b.mono.without(&f) {
                    let k = &base * &Rational::from_integer(mult as i64);
                    out.add_term(BasisVector::new(rest, b.top), c * &k);
                }
            }
        }
        _ => {
            if spec.zero_modes_vanish() {
                return out;
            }
            let m = spec.zero_mode_matrix(op.gen.color, op.gen.power);
            for (b, c) in w.iter() {
                for row in 0..m.rows() {
                    let e = m.get(row, b.top);
                    if !e.is_zero() {
                        out.add_term(BasisVector::new(b.mono.clone(), row), c * e);
                    }
                }
            }
        }
    }
    out
}

/// [`apply_mode`] on an element of `M(l)` (the adjoint module).
pub fn apply_mode_fock(op: ModeOp, v: &FockState, spec: &ModuleSpec) -> Result<FockState, FockError> {
    Ok(apply_mode(op, &v.to_module(), spec)?.to_fock())
}
