use serde::{Deserialize, Serialize};

use crate::exactmath::{RatMatrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleKind {
    /// `M(l)` acting on itself.
    Adjoint,
    /// `M(l) ⊗ Ω(λ, c)`: `W(λ, c, l)` when `r = 1`, `G(λ, c, l)` in general.
    Evaluation,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("the level l must be nonzero")]
    ZeroLevel,
    #[error("color count d must be at least 1")]
    NoColors,
    #[error("expected {d} entries in lambda, got {got}")]
    LambdaLength { d: usize, got: usize },
    #[error("expected {d} top-space matrices, got {got}")]
    MatrixCount { d: usize, got: usize },
    #[error("top-space matrix {index} is {rows}x{cols}, expected {r}x{r}")]
    MatrixShape {
        index: usize,
        rows: usize,
        cols: usize,
        r: usize,
    },
    #[error("the top space must be at least one-dimensional")]
    EmptyTop,
    #[error("top-space matrices {a} and {b} do not commute")]
    NotCommuting { a: usize, b: usize },
    #[error("H_{index} - lambda_{index} I is not nilpotent (lambda_{index} = {lambda})")]
    NotNilpotent { index: usize, lambda: Rational },
    #[error("c^2 = 1 is not allowed here (the zero-mode tail diverges)")]
    UnitEvaluationPoint,
}

/// Which module is being acted on, with all the scalars it depends on.
///
/// `h[i]` is the matrix of `u^(i)` on the top space and `lambda[i]` its
/// unique eigenvalue. For the adjoint module the top space is the line
/// spanned by the vacuum and every zero mode acts as 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct ModuleSpec {
    kind: ModuleKind,
    d: usize,
    level: Rational,
    c: Rational,
    lambda: Vec<Rational>,
    h: Vec<RatMatrix>,
}

impl ModuleSpec {
    /// The vertex algebra `M(l)` itself, with `d` colors.
    pub fn adjoint(d: usize, level: Rational) -> Result<Self, SpecError> {
        Self::new(
            ModuleKind::Adjoint,
            d,
            level,
            Rational::zero(),
            vec![Rational::zero(); d],
            vec![RatMatrix::zeros(1, 1); d],
        )
    }

    /// `W(λ, c, l)`: one-dimensional top space on which `u^(i)` acts as `λ_i`.
    pub fn evaluation(lambda: Vec<Rational>, c: Rational, level: Rational) -> Result<Self, SpecError> {
        let d = lambda.len();
        let h = lambda.iter().map(|x| RatMatrix::scalar(1, x)).collect();
        Self::new(ModuleKind::Evaluation, d, level, c, lambda, h)
    }

    /// `G(λ, c, l)` with top-space action `h`; each `λ_i` is read off as
    /// `tr(H_i) / r` and then validated.
    pub fn logarithmic(h: Vec<RatMatrix>, c: Rational, level: Rational) -> Result<Self, SpecError> {
        let r = h.first().map_or(0, RatMatrix::rows);
        if r == 0 {
            return Err(SpecError::EmptyTop);
        }
        let r_q = Rational::from_integer(r as i64);
        let lambda = h.iter().map(|m| &m.trace() / &r_q).collect();
        Self::new(ModuleKind::Evaluation, h.len(), level, c, lambda, h)
    }

    pub fn new(
        kind: ModuleKind,
        d: usize,
        level: Rational,
        c: Rational,
        lambda: Vec<Rational>,
        h: Vec<RatMatrix>,
    ) -> Result<Self, SpecError> {
        if level.is_zero() {
            return Err(SpecError::ZeroLevel);
        }
        if d == 0 {
            return Err(SpecError::NoColors);
        }
        if lambda.len() != d {
            return Err(SpecError::LambdaLength { d, got: lambda.len() });
        }
        if h.len() != d {
            return Err(SpecError::MatrixCount { d, got: h.len() });
        }
        let (c, lambda, h) = match kind {
            ModuleKind::Adjoint => (
                Rational::zero(),
                vec![Rational::zero(); d],
                vec![RatMatrix::zeros(1, 1); d],
            ),
            ModuleKind::Evaluation => (c, lambda, h),
        };
        let r = h[0].rows();
        if r == 0 {
            return Err(SpecError::EmptyTop);
        }
        for (index, m) in h.iter().enumerate() {
            if m.rows() != r || m.cols() != r {
                return Err(SpecError::MatrixShape {
                    index,
                    rows: m.rows(),
                    cols: m.cols(),
                    r,
                });
            }
        }
        for a in 0..d {
            for b in a + 1..d {
                if !h[a].commutes_with(&h[b]) {
                    return Err(SpecError::NotCommuting { a: a + 1, b: b + 1 });
                }
            }
        }
        for (index, (m, lam)) in h.iter().zip(&lambda).enumerate() {
            let shifted = m - &RatMatrix::scalar(r, lam);
            if !shifted.pow(r as u32).is_zero() {
                return Err(SpecError::NotNilpotent {
                    index: index + 1,
                    lambda: lam.clone(),
                });
            }
        }
        Ok(ModuleSpec {
            kind,
            d,
            level,
            c,
            lambda,
            h,
        })
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> &Rational {
        &self.level
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    pub fn h(&self) -> &[RatMatrix] {
        &self.h
    }

    /// Dimension of the top space.
    pub fn r(&self) -> usize {
        self.h[0].rows()
    }

    /// True when every zero mode acts as 0.
    pub fn zero_modes_vanish(&self) -> bool {
        self.kind == ModuleKind::Adjoint || self.h.iter().all(RatMatrix::is_zero)
    }

    /// `c^2 = 1` with a nonzero zero-mode action.
    pub fn has_divergent_tail(&self) -> bool {
        !self.zero_modes_vanish() && (&self.c * &self.c).is_one()
    }

    /// The matrix `c^j H_i` of the zero mode `(u^(i) t^j)(0)` on the top space.
    pub fn zero_mode_matrix(&self, color: u32, power: u32) -> RatMatrix {
        let i = color as usize - 1;
        if self.kind == ModuleKind::Adjoint {
            return RatMatrix::zeros(1, 1);
        }
        self.h[i].scale(&self.c.pow(power as i32))
    }

    /// `Σ_i H_i^2`.
    pub fn h_square_sum(&self) -> RatMatrix {
        let r = self.r();
        self.h
            .iter()
            .fold(RatMatrix::zeros(r, r), |acc, m| &acc + &(m * m))
    }

    /// `⟨λ, λ⟩ = Σ λ_i^2` (the form is the identity in the chosen basis).
    pub fn lambda_norm(&self) -> Rational {
        self.lambda.iter().map(|x| x * x).sum()
    }
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    kind: ModuleKind,
    d: usize,
    l: Rational,
    #[serde(default)]
    c: Rational,
    #[serde(default)]
    lambda: Option<Vec<Rational>>,
    #[serde(rename = "H", default)]
    h: Option<serde_json::Value>,
}

impl TryFrom<RawSpec> for ModuleSpec {
    type Error = String;

    fn try_from(raw: RawSpec) -> Result<Self, String> {
        match raw.kind {
            ModuleKind::Adjoint => ModuleSpec::adjoint(raw.d, raw.l).map_err(|e| e.to_string()),
            ModuleKind::Evaluation => {
                let h: Option<Vec<RatMatrix>> = match raw.h {
                    None => None,
                    Some(v) => Some(parse_matrix_list(v)?),
                };
                match (h, raw.lambda) {
                    (Some(h), Some(lambda)) => {
                        ModuleSpec::new(ModuleKind::Evaluation, raw.d, raw.l, raw.c, lambda, h)
                    }
                    (Some(h), None) => ModuleSpec::logarithmic(h, raw.c, raw.l),
                    (None, Some(lambda)) => ModuleSpec::evaluation(lambda, raw.c, raw.l),
                    (None, None) => {
                        return Err("evaluation module needs lambda or H".to_string());
                    }
                }
                .map_err(|e| e.to_string())
                .and_then(|s| {
                    if s.d() != raw.d {
                        Err(format!("d = {} does not match the data (d = {})", raw.d, s.d()))
                    } else {
                        Ok(s)
                    }
                })
            }
        }
    }
}

/// Accepts a single matrix (for d = 1) or a list of matrices.
pub(crate) fn parse_matrix_list(v: serde_json::Value) -> Result<Vec<RatMatrix>, String> {
    let depth = {
        let mut depth = 0;
        let mut cur = &v;
        while let serde_json::Value::Array(items) = cur {
            depth += 1;
            match items.first() {
                Some(first) => cur = first,
                None => break,
            }
        }
        depth
    };
    match depth {
        2 => serde_json::from_value::<RatMatrix>(v)
            .map(|m| vec![m])
            .map_err(|e| e.to_string()),
        3 => serde_json::from_value::<Vec<RatMatrix>>(v).map_err(|e| e.to_string()),
        _ => Err("H must be a matrix or a list of matrices".to_string()),
    }
}

impl From<ModuleSpec> for RawSpec {
    fn from(s: ModuleSpec) -> RawSpec {
        let adjoint = s.kind == ModuleKind::Adjoint;
        RawSpec {
            kind: s.kind,
            d: s.d,
            l: s.level,
            c: s.c,
            lambda: if adjoint { None } else { Some(s.lambda) },
            h: if adjoint {
                None
            } else {
                Some(serde_json::to_value(&s.h).expect("matrices serialize"))
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn level_must_be_nonzero() {
        assert_eq!(ModuleSpec::adjoint(1, q(0)), Err(SpecError::ZeroLevel));
    }

    #[test]
    fn logarithmic_reads_lambda_from_trace() {
        let s = ModuleSpec::logarithmic(
            vec![RatMatrix::from_i64(&[&[1, 1], &[0, 1]])],
            q(0),
            q(1),
        )
        .unwrap();
        assert_eq!(s.lambda(), &[q(1)]);
        assert_eq!(s.r(), 2);
    }

    #[test]
    fn rejects_two_eigenvalues() {
        let e = ModuleSpec::logarithmic(vec![RatMatrix::from_i64(&[&[1, 0], &[0, 2]])], q(0), q(1));
        assert!(matches!(e, Err(SpecError::NotNilpotent { .. })));
    }

    #[test]
    fn rejects_noncommuting_pair() {
        let a = RatMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        let b = RatMatrix::from_i64(&[&[0, 0], &[1, 0]]);
        let e = ModuleSpec::new(
            ModuleKind::Evaluation,
            2,
            q(1),
            q(0),
            vec![q(0), q(0)],
            vec![a, b],
        );
        assert_eq!(e, Err(SpecError::NotCommuting { a: 1, b: 2 }));
    }

    #[test]
    fn json_round_trip() {
        let s = ModuleSpec::logarithmic(
            vec![RatMatrix::from_i64(&[&[2, 1], &[0, 2]])],
            Rational::new(1, 3),
            Rational::new(-1, 2),
        )
        .unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains(r#""kind":"evaluation""#));
        let back: ModuleSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);

        let adj = ModuleSpec::adjoint(2, q(3)).unwrap();
        let back: ModuleSpec = serde_json::from_str(&serde_json::to_string(&adj).unwrap()).unwrap();
        assert_eq!(back, adj);
    }

    #[test]
    fn json_single_matrix_for_one_color() {
        let s: ModuleSpec =
            serde_json::from_str(r#"{"kind":"evaluation","d":1,"l":"1","c":"0","H":[["1","1"],["0","1"]]}"#)
                .unwrap();
        assert_eq!(s.r(), 2);
        assert_eq!(s.lambda(), &[q(1)]);
    }
}
