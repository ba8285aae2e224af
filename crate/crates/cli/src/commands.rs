use std::ops::RangeInclusive;

use clap::{Args, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use qcva_core::dims::{
    bipartite_table, check_strong_grading, enumeration_table, gf_paper_ct, gf_product_count,
};
use qcva_core::fock::enumerate_basis;
use qcva_core::repcat::{
    casimir_partial, casimir_scalar, intertwiner_dim, is_genuine_logarithmic, vacuum_space,
    HomProblem, RepError, TopSpace,
};
use qcva_core::vertexops::{
    check_d_equals_lminus1, check_field_commutator, check_l0_grading, check_l_mode_commutator,
    check_virasoro, l_is_exact, VertexError,
};
use qcva_core::{CheckReport, FockState, GenIndex, ModuleKind, ModuleSpec, Rational};

use crate::config::{self, ConfigError, ModuleArgs, RationalList};
use crate::output::{self, Format};
use crate::Rendered;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    /// [L(n), a(k)] = -k a(n+k)
    E1,
    /// [L(m), L(n)] = (m-n) L(m+n)
    Virasoro,
    /// [L(n), A_k] = Σ C(n+1, m+1) (L(m)A)_{k+n-m}
    FieldCommutator,
    /// v_j W^(k) lies in N-weights <= m + k
    StrongGrading,
    /// L(0) = weight + top matrix, L(j) keeps the N-weight
    L0Grading,
    /// L(-1) = D on M(l)
    DEqualsLminus1,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    identity: Identity,
    #[command(flatten)]
    module: ModuleArgs,
    /// Virasoro indices (default -1..3; -1..2 for field-commutator).
    #[arg(long, value_parser = config::int_range, allow_hyphen_values = true)]
    m_range: Option<RangeInclusive<i64>>,
    /// Mode indices of a(k), A_k or v_j.
    #[arg(long, default_value = "-3..3", value_parser = config::int_range, allow_hyphen_values = true)]
    k_range: RangeInclusive<i64>,
    /// Single generator i,j for e1 (default: all with j <= max-nwt).
    #[arg(long, value_parser = config::gen_index)]
    gen: Option<GenIndex>,
    /// Single mode index, overriding --k-range.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    /// Single Virasoro index, overriding --m-range.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<i64>,
    /// A field as a JSON state, e.g. '[{"mono":[[1,0,1]],"top":0,"coeff":"1"}]'
    /// (default: every basis monomial up to --field-wt).
    #[arg(long)]
    field: Option<String>,
    #[arg(long, default_value_t = 2)]
    field_wt: u64,
    #[arg(long, default_value_t = 1)]
    field_nwt: u64,
    /// Check only this many (field, mode) pairs, drawn with --seed.
    #[arg(long)]
    samples: Option<usize>,
}

fn vertex_err(e: VertexError) -> ConfigError {
    ConfigError::new(e.to_string())
}

fn require_exact(indices: &[i64], spec: &ModuleSpec, j_max: Option<u32>) -> Result<(), ConfigError> {
    if j_max.is_some() {
        return Ok(());
    }
    if let Some(n) = indices.iter().find(|&&n| !l_is_exact(n, spec)) {
        return Err(ConfigError::new(format!(
            "L({n}) has an infinite zero-mode tail on this module (c != 0); pass --j-max to run a truncated check"
        )));
    }
    Ok(())
}

fn fields(args: &VerifyArgs, spec: &ModuleSpec) -> Result<Vec<FockState>, ConfigError> {
    if let Some(text) = &args.field {
        let v: FockState =
            serde_json::from_str(text).map_err(|e| ConfigError::new(format!("--field: {e}")))?;
        return Ok(vec![v]);
    }
    let mut out = Vec::new();
    for wt in 0..=args.field_wt {
        for nwt in 0..=args.field_nwt {
            out.extend(enumerate_basis(spec.d(), nwt, wt).into_iter().map(FockState::basis));
        }
    }
    Ok(out)
}

fn sample_pairs<T: Clone>(pairs: Vec<T>, samples: Option<usize>, seed: u64) -> Vec<T> {
    match samples {
        Some(n) if n < pairs.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked: Vec<(usize, T)> = pairs.into_iter().enumerate().collect::<Vec<_>>();
            picked.shuffle(&mut rng);
            picked.truncate(n);
            // keep the sweep order canonical
            picked.sort_by_key(|(i, _)| *i);
            picked.into_iter().map(|(_, p)| p).collect()
        }
        _ => pairs,
    }
}

pub fn verify(args: &VerifyArgs, format: Format, seed: u64) -> Result<Rendered, ConfigError> {
    let spec = args.module.spec()?;
    let tr = args.module.truncation();
    let default_m = if args.identity == Identity::FieldCommutator {
        -1..=2
    } else {
        -1..=3
    };
    let ns: Vec<i64> = match args.n {
        Some(n) => vec![n],
        None => args.m_range.clone().unwrap_or(default_m).collect(),
    };
    let ks: Vec<i64> = match args.k {
        Some(k) => vec![k],
        None => args.k_range.clone().collect(),
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    match args.identity {
        Identity::E1 => {
            require_exact(&ns, &spec, args.module.j_max)?;
            let gens: Vec<GenIndex> = match args.gen {
                Some(g) => vec![g],
                None => (1..=spec.d() as u32)
                    .flat_map(|i| (0..=args.module.max_nwt as u32).map(move |j| GenIndex::new(i, j)))
                    .collect(),
            };
            for g in gens {
                for &n in &ns {
                    for &k in &ks {
                        reports.push(check_l_mode_commutator(n, g, k, &spec, &tr).map_err(vertex_err)?);
                    }
                }
            }
        }
        Identity::Virasoro => {
            let mut needed = ns.clone();
            for &m in &ns {
                for &n in &ns {
                    if m != n {
                        needed.push(m + n);
                    }
                }
            }
            require_exact(&needed, &spec, args.module.j_max)?;
            for &m in &ns {
                for &n in &ns {
                    reports.push(check_virasoro(m, n, &spec, &tr).map_err(vertex_err)?);
                }
            }
        }
        Identity::FieldCommutator => {
            require_exact(&ns, &spec, args.module.j_max)?;
            let pairs: Vec<(FockState, i64, i64)> = fields(args, &spec)?
                .into_iter()
                .flat_map(|a| {
                    let ks = ks.clone();
                    ns.iter()
                        .flat_map(move |&n| ks.clone().into_iter().map(move |k| (n, k)))
                        .map(move |(n, k)| (a.clone(), n, k))
                })
                .collect();
            for (a, n, k) in sample_pairs(pairs, args.samples, seed) {
                reports.push(check_field_commutator(n, &a, k, &spec, &tr).map_err(vertex_err)?);
            }
        }
        Identity::StrongGrading => {
            let pairs: Vec<(FockState, i64)> = fields(args, &spec)?
                .into_iter()
                .flat_map(|v| ks.iter().map(move |&k| (v.clone(), k)))
                .collect();
            let sample = sample_pairs(pairs, args.samples, seed);
            reports.push(check_strong_grading(&spec, &tr, &sample).map_err(vertex_err)?);
        }
        Identity::L0Grading => {
            require_exact(&ns, &spec, args.module.j_max)?;
            for &j in &ns {
                reports.push(check_l0_grading(&spec, &tr, j..=j).map_err(vertex_err)?);
            }
        }
        Identity::DEqualsLminus1 => {
            if spec.kind() != ModuleKind::Adjoint {
                return Err(ConfigError::new(
                    "d-equals-lminus1 is a statement about M(l); drop --lambda/--H",
                ));
            }
            reports.push(check_d_equals_lminus1(spec.d(), spec.level(), &tr).map_err(vertex_err)?);
        }
    }
    Ok(Rendered {
        pass: reports.iter().all(|r| r.defect_zero),
        text: output::reports(&reports, format),
    })
}

#[derive(Debug, Args)]
pub struct DimsArgs {
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Largest weight n (power of p).
    #[arg(long, default_value_t = 10)]
    max_p: u64,
    /// Largest N-weight m (power of q).
    #[arg(long, default_value_t = 8)]
    max_q: u64,
}

pub fn dims(args: &DimsArgs, format: Format) -> Result<Rendered, ConfigError> {
    if args.d == 0 {
        return Err(ConfigError::new("--d must be at least 1"));
    }
    let (p, q) = (args.max_p, args.max_q);
    let enumerated = enumeration_table(args.d, p, q);
    let dp = bipartite_table(args.d, p, q);
    let product = gf_product_count(args.d, p, q);
    // the constant-term formula is stated for one color
    let ct = (args.d == 1).then(|| gf_paper_ct(p, q));
    let mut rows = Vec::new();
    let mut pass = true;
    for m in 0..=q {
        for n in 0..=p {
            let (e, d, g) = (enumerated.get(m, n), dp.get(m, n), product.get(m, n));
            pass &= e == d && d == g;
            let (c, diff) = match &ct {
                Some(t) => {
                    let c = t.get(m, n);
                    (Some(c), Some(d as i128 - c as i128))
                }
                None => (None, None),
            };
            rows.push((m, n, e, d, g, c, diff));
        }
    }
    let meta = json!({"d": args.d, "max_p": p, "max_q": q, "all_agree": pass});
    let text = match format {
        Format::Json => output::json_string(&json!({
            "meta": meta,
            "rows": rows.iter().map(|(m, n, e, d, g, c, diff)| json!({
                "m": m, "n": n, "enum": e.to_string(), "dp": d.to_string(),
                "gf_product": g.to_string(),
                "gf_paper_ct": c.map(|x| x.to_string()),
                "diff": diff.map(|x| x.to_string()),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv | Format::Text => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|(m, n, e, d, g, c, diff)| {
                    vec![
                        m.to_string(),
                        n.to_string(),
                        e.to_string(),
                        d.to_string(),
                        g.to_string(),
                        c.map(|x| x.to_string()).unwrap_or_default(),
                        diff.map(|x| x.to_string()).unwrap_or_default(),
                    ]
                })
                .collect();
            let header = ["m", "n", "enum", "dp", "gf_product", "gf_paper_ct", "diff"];
            let meta_line = format!("d={},max_p={p},max_q={q},all_agree={pass}", args.d);
            if format == Format::Csv {
                output::csv_string(Some(&meta_line), &header, &body)
            } else {
                let mut s = format!("{meta_line}\n{}\n", header.join("\t"));
                for r in body {
                    s.push_str(&r.join("\t"));
                    s.push('\n');
                }
                s
            }
        }
    };
    Ok(Rendered { text, pass })
}

#[derive(Debug, Subcommand)]
pub enum ModuleCommand {
    /// The generalized Casimir on V(λ, c).
    Casimir {
        #[arg(long, value_parser = config::rational_list, allow_hyphen_values = true)]
        lambda: RationalList,
        #[arg(long, default_value = "0", value_parser = config::rational, allow_hyphen_values = true)]
        c: Rational,
        /// Also report the sum cut at t-power <= this.
        #[arg(long)]
        cutoff: Option<u32>,
    },
    /// Vectors killed by all annihilation modes, within the truncation.
    Vacuum(ModuleArgs),
    /// Jordan blocks of L(0) on the top space.
    Logcheck(ModuleArgs),
    /// dim Hom(Ω1, Hom(Ω2, Ω3)) at c = 0, tops as r<dim>:<block>@<λ>.
    Homdim {
        #[arg(long, num_args = 3, value_parser = config::top_shorthand, allow_hyphen_values = true)]
        tops: Vec<TopSpace>,
    },
}

fn rep_err(e: RepError) -> ConfigError {
    ConfigError::new(e.to_string())
}

fn scalar_output(value: serde_json::Value, format: Format) -> String {
    match format {
        Format::Json => output::json_string(&value),
        Format::Csv => {
            let obj = value.as_object().cloned().unwrap_or_default();
            let header: Vec<&str> = obj.keys().map(String::as_str).collect();
            let row: Vec<String> = obj
                .values()
                .map(|v| v.as_str().map_or_else(|| v.to_string(), str::to_string))
                .collect();
            output::csv_string(None, &header, &[row])
        }
        Format::Text => {
            let obj = value.as_object().cloned().unwrap_or_default();
            obj.iter()
                .map(|(k, v)| format!("{k}: {}\n", v.as_str().map_or_else(|| v.to_string(), str::to_string)))
                .collect()
        }
    }
}

pub fn module(cmd: &ModuleCommand, format: Format) -> Result<Rendered, ConfigError> {
    let text = match cmd {
        ModuleCommand::Casimir { lambda: RationalList(lambda), c, cutoff } => {
            let scalar = casimir_scalar(lambda, c).map_err(rep_err)?;
            match cutoff {
                None if format == Format::Json => output::json_string(&json!(scalar)),
                None => scalar_output(json!({ "casimir": scalar }), format),
                Some(j) => scalar_output(
                    json!({
                        "casimir": scalar,
                        "partial": casimir_partial(lambda, c, *j),
                        "cutoff": j,
                    }),
                    format,
                ),
            }
        }
        ModuleCommand::Vacuum(args) => {
            let spec = args.spec()?;
            let v = vacuum_space(&spec, &args.truncation());
            match format {
                Format::Json => output::json_string(&json!({
                    "dim": v.dim(),
                    "r": spec.r(),
                    "vectors": v.vectors,
                    "max_wt": args.max_wt,
                    "max_nwt": args.max_nwt,
                })),
                _ => {
                    let mut s = scalar_output(json!({"dim": v.dim(), "r": spec.r()}), format);
                    if format == Format::Text {
                        for vec in &v.vectors {
                            s.push_str(&format!("  {vec}\n"));
                        }
                    }
                    s
                }
            }
        }
        ModuleCommand::Logcheck(args) => {
            let spec = args.spec()?;
            let (genuine, blocks) = is_genuine_logarithmic(&spec).map_err(rep_err)?;
            scalar_output(json!({"genuine": genuine, "blocks": blocks}), format)
        }
        ModuleCommand::Homdim { tops } => {
            let p = HomProblem::new(tops[0].clone(), tops[1].clone(), tops[2].clone());
            let dim = intertwiner_dim(&p).map_err(rep_err)?;
            match format {
                Format::Json => output::json_string(&json!(dim)),
                _ => scalar_output(json!({ "dim": dim }), format),
            }
        }
    };
    Ok(Rendered { text, pass: true })
}
