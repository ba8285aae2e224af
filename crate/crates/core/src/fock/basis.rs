use super::{BasisVector, Factor, Monomial};

/// All monomials over `d` colors with N-weight `m` (sum of `t`-powers) and
/// weight `n` (sum of modes), in canonical order.
pub fn enumerate_basis(d: usize, m: u64, n: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend(d as u32, m, n, None, &mut current, &mut out);
    out.sort();
    out
}

fn extend(
    d: u32,
    rem_m: u64,
    rem_n: u64,
    min: Option<Factor>,
    current: &mut Vec<Factor>,
    out: &mut Vec<Monomial>,
) {
    if rem_n == 0 {
        if rem_m == 0 {
            out.push(Monomial::from_factors(current.clone()));
        }
        return;
    }
    for color in 1..=d {
        for power in 0..=rem_m as u32 {
            for mode in 1..=rem_n as u32 {
                let f = Factor::new(color, power, mode);
                if min.is_some_and(|lo| f < lo) {
                    continue;
                }
                current.push(f);
                extend(d, rem_m - power as u64, rem_n - mode as u64, Some(f), current, out);
                current.pop();
            }
        }
    }
}

/// Every basis vector of `M(l) ⊗ Ω` (top dimension `r`) with weight above the
/// top at most `max_wt` and N-weight at most `max_nwt`, ordered by
/// `(weight, N-weight)` and then canonically.
pub fn module_basis(d: usize, r: usize, max_wt: u64, max_nwt: u64) -> Vec<BasisVector> {
    let mut out = Vec::new();
    for n in 0..=max_wt {
        for m in 0..=max_nwt {
            for mono in enumerate_basis(d, m, n) {
                for top in 0..r {
                    out.push(BasisVector::new(mono.clone(), top));
                }
            }
        }
    }
    out
}
