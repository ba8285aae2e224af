//! Turning command-line values into module specifications, ranges and tops.

use std::ops::RangeInclusive;
use std::str::FromStr;

use clap::Args;
use qcva_core::repcat::TopSpace;
use qcva_core::{GenIndex, ModuleKind, ModuleSpec, RatMatrix, Rational, Truncation};

/// A usage or configuration problem (exit code 2).
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

impl ConfigError {
    pub fn new(msg: impl Into<String>) -> Self {
        ConfigError(msg.into())
    }
}

pub fn rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s.trim()).map_err(|e| e.to_string())
}

/// Comma-separated rationals (one clap value).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalList(pub Vec<Rational>);

pub fn rational_list(s: &str) -> Result<RationalList, String> {
    s.split(',').map(rational).collect::<Result<_, _>>().map(RationalList)
}

/// Top-space matrices (one clap value).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixList(pub Vec<RatMatrix>);

/// `a..b`, inclusive at both ends.
pub fn int_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a range like -1..3, got {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok(a..=b)
}

/// `i,j`: color and power of `t`.
pub fn gen_index(s: &str) -> Result<GenIndex, String> {
    let (i, j) = s
        .split_once(',')
        .ok_or_else(|| format!("expected a generator like 1,0, got {s:?}"))?;
    let i: u32 = i.trim().parse().map_err(|_| format!("bad color in {s:?}"))?;
    let j: u32 = j.trim().parse().map_err(|_| format!("bad power in {s:?}"))?;
    Ok(GenIndex::new(i, j))
}

/// `r<dim>:<block>@<λ>`: one color, eigenvalue `λ`, Jordan blocks of size
/// `block` on a `dim`-dimensional space.
pub fn top_shorthand(s: &str) -> Result<TopSpace, String> {
    let err = || format!("expected a top like r2:2@1/2, got {s:?}");
    let rest = s.strip_prefix('r').ok_or_else(err)?;
    let (dims, lambda) = rest.split_once('@').ok_or_else(err)?;
    let (r, block) = dims.split_once(':').ok_or_else(err)?;
    let r: usize = r.parse().map_err(|_| err())?;
    let block: usize = block.parse().map_err(|_| err())?;
    TopSpace::jordan(rational(lambda)?, r, block).map_err(|e| format!("{s}: {e}"))
}

/// One matrix `[[..]]` or a list of them `[[[..]], [[..]]]`.
pub fn matrix_list(s: &str) -> Result<MatrixList, String> {
    let value: serde_json::Value = serde_json::from_str(s).map_err(|e| format!("--H: {e}"))?;
    let nested_three = value
        .as_array()
        .and_then(|a| a.first())
        .and_then(|r| r.as_array())
        .and_then(|r| r.first())
        .is_some_and(|x| x.is_array());
    if nested_three {
        serde_json::from_value(value)
            .map(MatrixList)
            .map_err(|e| format!("--H: {e}"))
    } else {
        let m: RatMatrix = serde_json::from_value(value).map_err(|e| format!("--H: {e}"))?;
        Ok(MatrixList(vec![m]))
    }
}

/// Module and truncation flags shared by `verify` and `module`.
#[derive(Debug, Clone, Args)]
pub struct ModuleArgs {
    /// Number of colors (inferred from --lambda or --H when omitted).
    #[arg(long)]
    pub d: Option<usize>,
    /// Level l.
    #[arg(long, default_value = "1", value_parser = rational, allow_hyphen_values = true)]
    pub l: Rational,
    /// Evaluation point c.
    #[arg(long, default_value = "0", value_parser = rational, allow_hyphen_values = true)]
    pub c: Rational,
    /// Comma-separated weights, e.g. 1,1/2. With neither --lambda nor --H the
    /// module is M(l) itself.
    #[arg(long, value_parser = rational_list, allow_hyphen_values = true)]
    pub lambda: Option<RationalList>,
    /// Top-space matrices as JSON.
    #[arg(long = "H", value_parser = matrix_list)]
    pub h: Option<MatrixList>,
    #[arg(long, default_value_t = 4)]
    pub max_wt: u64,
    #[arg(long, default_value_t = 2)]
    pub max_nwt: u64,
    /// Cut-off for the t-power tail of L(-1); required whenever that tail is
    /// infinite.
    #[arg(long)]
    pub j_max: Option<u32>,
}

impl ModuleArgs {
    pub fn spec(&self) -> Result<ModuleSpec, ConfigError> {
        let spec = match (&self.lambda, &self.h) {
            (None, None) => ModuleSpec::adjoint(self.d.unwrap_or(1), self.l.clone()),
            (Some(RationalList(lambda)), None) => {
                ModuleSpec::evaluation(lambda.clone(), self.c.clone(), self.l.clone())
            }
            (None, Some(MatrixList(h))) => ModuleSpec::logarithmic(h.clone(), self.c.clone(), self.l.clone()),
            (Some(RationalList(lambda)), Some(MatrixList(h))) => ModuleSpec::new(
                ModuleKind::Evaluation,
                h.len(),
                self.l.clone(),
                self.c.clone(),
                lambda.clone(),
                h.clone(),
            ),
        }
        .map_err(|e| ConfigError::new(e.to_string()))?;
        if let Some(d) = self.d {
            if d != spec.d() {
                return Err(ConfigError::new(format!(
                    "--d {d} disagrees with the {} colors given",
                    spec.d()
                )));
            }
        }
        Ok(spec)
    }

    pub fn truncation(&self) -> Truncation {
        let tr = Truncation::new(self.max_wt, self.max_nwt);
        match self.j_max {
            Some(j) => tr.with_j_max(j),
            None => tr,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ranges_and_generators() {
        assert_eq!(int_range("-1..3").unwrap(), -1..=3);
        assert!(int_range("3..1").is_err());
        assert!(int_range("3").is_err());
        assert_eq!(gen_index("2,5").unwrap(), GenIndex::new(2, 5));
        assert!(gen_index("2").is_err());
    }

    #[test]
    fn parses_tops() {
        let t = top_shorthand("r2:2@1/2").unwrap();
        assert_eq!(t.r(), 2);
        assert_eq!(t.lambda(), &[Rational::new(1, 2)]);
        assert!(top_shorthand("r3:2@1").is_err());
        assert!(top_shorthand("2:2@1").is_err());
    }

    #[test]
    fn parses_matrices() {
        assert_eq!(matrix_list("[[1,1],[0,1]]").unwrap().0.len(), 1);
        assert_eq!(matrix_list("[[[1]],[[\"2/3\"]]]").unwrap().0.len(), 2);
        assert!(matrix_list("[[1,1],[0]]").is_err());
    }
}
