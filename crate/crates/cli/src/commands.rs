//! The subcommands as plain functions returning their output, so tests can
//! call them without spawning a process.

use serde_json::{json, Value};
use tetrapet::bundle::{maximal_domains, Interval, MaxDomain, Space};
use tetrapet::exactnum::{fmt_rat, rat, Rat, Surd};
use tetrapet::pet::tetra_pet;
use tetrapet::renorm::{
    coding_sequence, convergents, eval_expansion, named_interval, parse_digits, split_expansion,
    split_expansion_surd, Family, SplitExpansion,
};
use tetrapet::verify::{
    certificate_from_bodies, verify_case, verify_half_interval, verify_theorem21_at,
    verify_theorem22_at, CheckReport, LemmaCase,
};
use tetrapet::{Point2, Poly2};

use crate::render::{svg_partition, svg_regions, svg_tiling, ColorMode, RenderSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
    Json,
}

/// What a command produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub body: String,
    pub warnings: Vec<String>,
    /// A check ran and failed.
    pub failed: bool,
}

impl Output {
    fn text(body: String) -> Self {
        Output {
            body,
            ..Default::default()
        }
    }
}

/// Bad input; exit code 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn input<E: std::fmt::Display>(e: E) -> InputError {
    InputError(e.to_string())
}

pub type CmdResult = Result<Output, InputError>;

fn poly_json(p: &Poly2) -> Value {
    Value::Array(
        p.verts()
            .iter()
            .map(|q: &Point2| json!([fmt_rat(&q.x), fmt_rat(&q.v)]))
            .collect(),
    )
}

fn json_lines(lines: &[Value]) -> String {
    let mut s = String::new();
    for l in lines {
        s.push_str(&l.to_string());
        s.push('\n');
    }
    s
}

/// `partition --s p/q`: domain and image partitions, numbered alike.
pub fn partition(s: &Rat, format: Format) -> CmdResult {
    let pet = tetra_pet::<Poly2>(s.clone()).map_err(input)?;
    let body = match format {
        Format::Svg => svg_partition(
            &pet,
            &RenderSpec::new(format!("s = {}", fmt_rat(s)), ColorMode::ByPiece),
        ),
        Format::Json => {
            let mut lines = vec![json!({"kind": "meta", "s": fmt_rat(s), "pieces": pet.len()})];
            for (k, p) in pet.pieces.iter().enumerate() {
                lines.push(json!({
                    "kind": "piece",
                    "index": k,
                    "domain": poly_json(&p.dom),
                    "image": poly_json(&p.image()),
                    "translation": [fmt_rat(&p.shift.dx), fmt_rat(&p.shift.dv)],
                }));
            }
            json_lines(&lines)
        }
    };
    Ok(Output::text(body))
}

/// A tiling parameter: exact, or a convergent standing in for a surd.
#[derive(Clone, Debug, PartialEq)]
pub enum TilingParam {
    Exact(Rat),
    Convergent { surd: String, depth: usize },
}

/// Parses `sqrt2-1` or any `a+b*sqrt(n)` form.
pub fn parse_surd(s: &str) -> Result<Surd, InputError> {
    let canon = match s {
        "sqrt2-1" | "sqrt(2)-1" => "-1+sqrt(2)",
        other => other,
    };
    Surd::parse(canon).map_err(input)
}

/// The `depth`-th convergent of the splitted expansion of a surd in (0, 1).
pub fn surd_convergent(surd: &str, depth: usize) -> Result<Rat, InputError> {
    if depth == 0 {
        return Err(InputError("depth must be at least 1".into()));
    }
    let x = parse_surd(surd)?;
    let e = split_expansion_surd(&x, depth + 2).map_err(input)?;
    let cs = convergents(&e.terms, depth);
    let (p, q) = cs
        .get(depth - 1)
        .ok_or_else(|| InputError(format!("only {} convergents available", cs.len())))?;
    Ok(Rat::new(p.clone(), q.clone()))
}

/// `tiling`: a greedy periodic tiling, partial if the budget runs out.
pub fn tiling(param: &TilingParam, budget: usize, n_max: usize, format: Format) -> CmdResult {
    let (s, approximate, label) = match param {
        TilingParam::Exact(s) => (s.clone(), false, format!("s = {}", fmt_rat(s))),
        TilingParam::Convergent { surd, depth } => {
            let s = surd_convergent(surd, *depth)?;
            let label = format!("s = {} near {surd}", fmt_rat(&s));
            (s, true, label)
        }
    };
    let pet = tetra_pet::<Poly2>(s.clone()).map_err(input)?;
    let t = pet.periodic_tiling(budget, n_max);
    let mut warnings = Vec::new();
    if !t.uncovered.is_empty() {
        warnings.push(format!(
            "partial tiling: {} tiles cover {} of the torus, {} holes left",
            t.tiles.len(),
            fmt_rat(&t.coverage),
            t.uncovered.len()
        ));
    }
    let body = match format {
        Format::Svg => {
            let mut spec = RenderSpec::new(label, ColorMode::ByPeriod);
            spec.approximate = approximate;
            svg_tiling(&t.tiles, &t.uncovered, &spec)
        }
        Format::Json => {
            let mut lines = vec![json!({
                "kind": "meta",
                "s": fmt_rat(&s),
                "approximate": approximate,
                "tiles": t.tiles.len(),
                "coverage": fmt_rat(&t.coverage),
                "holes": t.uncovered.len(),
            })];
            for tile in &t.tiles {
                lines.push(
                    json!({"kind": "tile", "period": tile.period, "poly": poly_json(&tile.tile)}),
                );
            }
            for h in &t.uncovered {
                lines.push(json!({"kind": "hole", "poly": poly_json(h)}));
            }
            json_lines(&lines)
        }
    };
    Ok(Output {
        body,
        warnings,
        failed: false,
    })
}

/// `renorm code <s>`.
pub fn renorm_code(s: &Rat, format: Format) -> CmdResult {
    let seq = coding_sequence(s).map_err(input)?;
    Ok(Output::text(match format {
        Format::Json => {
            let v: Vec<Value> = seq
                .iter()
                .map(|c| {
                    json!([
                        c.m,
                        c.n.map_or(Value::String("inf".into()), Value::from),
                        c.r
                    ])
                })
                .collect();
            format!("{}\n", Value::Array(v))
        }
        Format::Svg => {
            let parts: Vec<String> = seq.iter().map(|c| c.to_string()).collect();
            format!("{}\n", parts.join(" "))
        }
    }))
}

/// `renorm split <s>`; `s` may be a surd, truncated after `pairs` digit pairs.
pub fn renorm_split(s: &str, pairs: usize) -> CmdResult {
    let e = match tetrapet::exactnum::parse_rat(s) {
        Ok(q) => split_expansion(&q).map_err(input)?,
        Err(_) => split_expansion_surd(&parse_surd(s)?, pairs).map_err(input)?,
    };
    Ok(Output::text(format!("{e}\n")))
}

/// `renorm eval <digits>`: an odd number of digits means the orbit stops at 1/2.
pub fn renorm_eval(digits: &str) -> CmdResult {
    let terms = parse_digits(digits).map_err(input)?;
    let q = eval_expansion(&SplitExpansion::finite(terms)).map_err(input)?;
    Ok(Output::text(format!("{}\n", fmt_rat(&q))))
}

/// `renorm interval <family> <m> <n>`.
pub fn renorm_interval(family: &str, m: i64, n: i64) -> CmdResult {
    let fam: Family = family.parse().map_err(input)?;
    let iv = named_interval(fam, m, n).map_err(input)?;
    Ok(Output::text(format!("{iv}\n")))
}

fn domain_json(k: usize, d: &MaxDomain) -> Value {
    let t = d.transvec;
    json!({
        "kind": "domain",
        "index": k,
        "piece": d.piece_name(),
        "return_time": d.return_time,
        "translation": [t.a, t.b, t.c, t.d],
        "vertices": d.body.verts().iter().map(|p| json!([fmt_rat(&p.x), fmt_rat(&p.v), fmt_rat(&p.s)])).collect::<Vec<_>>(),
    })
}

/// `domains --space S --interval lo:hi`. SVG shows the slice at the midpoint.
pub fn domains(
    space: Space,
    iv: &Interval,
    max_steps: usize,
    format: Format,
) -> Result<(Output, Vec<MaxDomain>), InputError> {
    let doms = maximal_domains(space, iv, max_steps).map_err(input)?;
    let body = match format {
        Format::Json => {
            let mut lines = vec![json!({
                "kind": "meta",
                "space": space.to_string(),
                "interval": iv.to_string(),
                "domains": doms.len(),
            })];
            lines.extend(doms.iter().enumerate().map(|(k, d)| domain_json(k, d)));
            json_lines(&lines)
        }
        Format::Svg => {
            let mid = (iv.lo.clone() + iv.hi.clone()) / rat(2, 1);
            let mut regions: Vec<(String, Poly2)> = Vec::new();
            for (k, d) in doms.iter().enumerate() {
                regions.extend(
                    d.parts
                        .iter()
                        .filter_map(|(b, _)| b.slice_at_s(&mid))
                        .map(|p| (k.to_string(), p)),
                );
            }
            let label = format!("{space} over {iv}, slice at s = {}", fmt_rat(&mid));
            svg_regions(&regions, &RenderSpec::new(label, ColorMode::ByPiece))
        }
    };
    Ok((Output::text(body), doms))
}

/// Certificate text for a domain list.
pub fn domains_certificate(space: Space, iv: &Interval, doms: &[MaxDomain]) -> String {
    let bodies: Vec<(String, tetrapet::Polytope3)> = doms
        .iter()
        .enumerate()
        .map(|(k, d)| (format!("D_{k}"), d.body.clone()))
        .collect();
    certificate_from_bodies(space, iv.clone(), &bodies).to_string()
}

/// What `verify` should run.
#[derive(Clone, Debug, PartialEq)]
pub enum VerifyTarget {
    A23,
    A24,
    Half,
    At(Rat),
}

impl std::str::FromStr for VerifyTarget {
    type Err = InputError;
    fn from_str(s: &str) -> Result<Self, InputError> {
        Ok(match s {
            "a23" => VerifyTarget::A23,
            "a24" => VerifyTarget::A24,
            "half" => VerifyTarget::Half,
            _ => match s.strip_prefix("at:") {
                Some(q) => VerifyTarget::At(tetrapet::exactnum::parse_rat(q).map_err(input)?),
                None => {
                    return Err(InputError(format!(
                        "unknown target {s:?}; expected a23, a24, half or at:<p/q>"
                    )))
                }
            },
        })
    }
}

/// Runs a battery. `at:s` uses the half swap for `s ≥ 1/2` and the
/// similarity otherwise; outside its regime the similarity check fails.
pub fn verify(target: &VerifyTarget, max_steps: usize) -> CmdResult {
    let report: CheckReport = match target {
        VerifyTarget::A23 => verify_case(LemmaCase::A23, max_steps),
        VerifyTarget::A24 => verify_case(LemmaCase::A24, max_steps),
        VerifyTarget::Half => verify_half_interval(),
        VerifyTarget::At(s) => {
            if *s < Rat::from_integer(0.into()) || *s >= Rat::from_integer(1.into()) {
                return Err(InputError(format!(
                    "parameter {} is outside [0, 1)",
                    fmt_rat(s)
                )));
            }
            if *s >= rat(1, 2) {
                verify_theorem22_at(s)
            } else {
                verify_theorem21_at(s, max_steps)
            }
        }
    }
    .map_err(input)?;
    Ok(Output {
        failed: !report.passed(),
        body: format!("{report}\n"),
        warnings: vec![],
    })
}
