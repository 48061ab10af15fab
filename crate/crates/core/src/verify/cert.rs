//! Line-oriented certificate files listing polyhedra by their vertices.
//!
//! ```text
//! space=Y interval=2/5:5/12
//!
//! id=P_0 iota=1
//! x=-1/2 v=1/4 s=5/12
//! ...
//! ```
//!
//! `iota=1` means the block also stands for its point reflection. Values are
//! kept exactly as written; suspicious entries are flagged, not rewritten.

use std::fmt;
use std::path::Path;

use num_traits::Signed;
use thiserror::Error;

use crate::bundle::{Interval, Space};
use crate::exactnum::{fmt_rat, int, parse_rat, Rat};
use crate::geom::hull3;
use crate::{Point3, Polytope3};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("certificate is empty")]
    Empty,
    #[error("{0}")]
    Io(String),
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> CertError {
    CertError::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Something odd about an entry. Values are never altered because of a flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertFlag {
    /// A stray backslash before the value; the value after it is used.
    LeadingBackslash { line: usize, field: char },
    /// A vertex far outside the chart, as when a denominator went missing.
    OutsideChart { line: usize },
    /// A vertex whose `s` lies outside the header interval.
    OutsideInterval { line: usize },
    /// At `s = p/q` the coordinates of genuine vertices have denominators dividing `2q`.
    DenominatorMismatch { line: usize, field: char },
    /// The block names a partner other than itself.
    PairLabel { line: usize, claimed: String },
    /// The vertices do not span a solid.
    Degenerate,
}

impl CertFlag {
    /// Whether the block cannot be trusted as listed.
    pub fn is_fatal(&self) -> bool {
        !matches!(
            self,
            CertFlag::LeadingBackslash { .. } | CertFlag::PairLabel { .. }
        )
    }
}

impl fmt::Display for CertFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertFlag::LeadingBackslash { line, field } => {
                write!(f, "line {line}: stray backslash before {field}")
            }
            CertFlag::OutsideChart { line } => write!(f, "line {line}: vertex outside the chart"),
            CertFlag::OutsideInterval { line } => {
                write!(f, "line {line}: s outside the header interval")
            }
            CertFlag::DenominatorMismatch { line, field } => {
                write!(f, "line {line}: denominator of {field} does not divide 2q")
            }
            CertFlag::PairLabel { line, claimed } => {
                write!(f, "line {line}: block labelled as partner of {claimed}")
            }
            CertFlag::Degenerate => write!(f, "vertices do not span a solid"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertVertex {
    /// The three fields as written.
    pub raw: [String; 3],
    pub value: Point3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertBlock {
    pub id: String,
    pub iota: bool,
    pub pair: Option<String>,
    pub verts: Vec<CertVertex>,
    pub flags: Vec<CertFlag>,
    /// Comment lines directly above the block.
    pub comments: Vec<String>,
}

impl CertBlock {
    pub fn fatal(&self) -> bool {
        self.flags.iter().any(CertFlag::is_fatal)
    }

    pub fn body(&self) -> Option<Polytope3> {
        let pts: Vec<Point3> = self.verts.iter().map(|v| v.value.clone()).collect();
        hull3(&pts).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub space: Space,
    pub interval: Interval,
    pub blocks: Vec<CertBlock>,
}

impl Certificate {
    /// Every listed vertex set, ι-images included: `(id, vertices, flagged)`.
    pub fn entry_vertices(&self) -> Vec<(String, Vec<Point3>, bool)> {
        let mut out = Vec::new();
        for b in &self.blocks {
            let pts: Vec<Point3> = b.verts.iter().map(|v| v.value.clone()).collect();
            let flagged = b.fatal();
            if b.iota {
                let refl = pts
                    .iter()
                    .map(|p| Point3::new(-p.x.clone(), -p.v.clone(), p.s.clone()))
                    .collect();
                out.push((b.id.clone(), pts, flagged));
                out.push((format!("iota({})", b.id), refl, flagged));
            } else {
                out.push((b.id.clone(), pts, flagged));
            }
        }
        out
    }

    /// Every listed polyhedron, ι-images included: `(id, body, flagged)`.
    pub fn entries(&self) -> Vec<(String, Option<Polytope3>, bool)> {
        self.entry_vertices()
            .into_iter()
            .map(|(id, pts, f)| (id, hull3(&pts).ok(), f))
            .collect()
    }

    /// The usable entries only.
    pub fn polytopes(&self) -> Vec<(String, Option<Polytope3>)> {
        self.entries()
            .into_iter()
            .map(|(id, b, bad)| (id, if bad { None } else { b }))
            .collect()
    }

    pub fn flags(&self) -> Vec<(String, CertFlag)> {
        self.blocks
            .iter()
            .flat_map(|b| b.flags.iter().map(move |f| (b.id.clone(), f.clone())))
            .collect()
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "space={} interval={}", self.space, self.interval)?;
        for b in &self.blocks {
            writeln!(f)?;
            for c in &b.comments {
                writeln!(f, "{c}")?;
            }
            write!(f, "id={} iota={}", b.id, u8::from(b.iota))?;
            if let Some(p) = &b.pair {
                write!(f, " pair={p}")?;
            }
            writeln!(f)?;
            for v in &b.verts {
                writeln!(f, "x={} v={} s={}", v.raw[0], v.raw[1], v.raw[2])?;
            }
        }
        Ok(())
    }
}

/// Splits `key=value` tokens, reporting the column of each value.
fn fields(line: &str) -> Vec<(&str, &str, usize)> {
    let mut out = Vec::new();
    let mut col = 0;
    for tok in line.split(' ') {
        if let Some((k, v)) = tok.split_once('=') {
            out.push((k, v, col + k.len() + 2));
        }
        col += tok.len() + 1;
    }
    out
}

pub fn parse_certificate(text: &str) -> Result<Certificate, CertError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    let (hline, header) = loop {
        match lines.next() {
            None => return Err(CertError::Empty),
            Some((_, l)) if l.is_empty() || l.starts_with('#') => continue,
            Some(h) => break h,
        }
    };
    let mut space = None;
    let mut interval = None;
    for (k, v, col) in fields(header) {
        match k {
            "space" => space = Some(v.parse::<Space>().map_err(|e| perr(hline, col, e))?),
            "interval" => interval = Some(v.parse::<Interval>().map_err(|e| perr(hline, col, e))?),
            _ => return Err(perr(hline, col, format!("unknown header key {k}"))),
        }
    }
    let space = space.ok_or_else(|| perr(hline, 1, "header lacks space="))?;
    let interval = interval.ok_or_else(|| perr(hline, 1, "header lacks interval="))?;

    let mut blocks: Vec<CertBlock> = Vec::new();
    let mut comments = Vec::new();
    let mut open = false;
    for (ln, l) in lines {
        if l.is_empty() {
            open = false;
            continue;
        }
        if l.starts_with('#') {
            comments.push(l.to_string());
            continue;
        }
        if l.starts_with("id=") {
            let mut b = CertBlock {
                id: String::new(),
                iota: false,
                pair: None,
                verts: Vec::new(),
                flags: Vec::new(),
                comments: std::mem::take(&mut comments),
            };
            for (k, v, col) in fields(l) {
                match k {
                    "id" => b.id = v.to_string(),
                    "iota" => {
                        b.iota = match v {
                            "0" => false,
                            "1" => true,
                            _ => return Err(perr(ln, col, "iota must be 0 or 1")),
                        }
                    }
                    "pair" => b.pair = Some(v.to_string()),
                    _ => return Err(perr(ln, col, format!("unknown block key {k}"))),
                }
            }
            if b.id.is_empty() {
                return Err(perr(ln, 4, "empty id"));
            }
            if let Some(p) = &b.pair {
                if *p != b.id {
                    b.flags.push(CertFlag::PairLabel {
                        line: ln,
                        claimed: p.clone(),
                    });
                }
            }
            blocks.push(b);
            open = true;
            continue;
        }
        if !open {
            return Err(perr(ln, 1, "vertex line outside a block"));
        }
        let block = blocks.last_mut().expect("open block");
        let fs = fields(l);
        let mut raw: [String; 3] = Default::default();
        let mut vals: [Option<Rat>; 3] = [None, None, None];
        for (k, v, col) in fs {
            let slot = match k {
                "x" => 0,
                "v" => 1,
                "s" => 2,
                _ => return Err(perr(ln, col, format!("unknown vertex key {k}"))),
            };
            raw[slot] = v.to_string();
            let clean = match v.strip_prefix('\\') {
                Some(rest) => {
                    block.flags.push(CertFlag::LeadingBackslash {
                        line: ln,
                        field: k.chars().next().unwrap_or('?'),
                    });
                    rest
                }
                None => v,
            };
            vals[slot] = Some(parse_rat(clean).map_err(|e| perr(ln, col, e.to_string()))?);
        }
        let [Some(x), Some(v), Some(s)] = vals else {
            return Err(perr(ln, 1, "vertex needs x=, v= and s="));
        };
        if x.abs() > int(2) || v.abs() > int(1) {
            block.flags.push(CertFlag::OutsideChart { line: ln });
        }
        if s < interval.lo || s > interval.hi {
            block.flags.push(CertFlag::OutsideInterval { line: ln });
        }
        let two_q = s.denom() * 2;
        for (c, val) in [('x', &x), ('v', &v)] {
            if &two_q % val.denom() != 0.into() {
                block
                    .flags
                    .push(CertFlag::DenominatorMismatch { line: ln, field: c });
            }
        }
        block.verts.push(CertVertex {
            raw,
            value: Point3::new(x, v, s),
        });
    }
    if blocks.is_empty() {
        return Err(CertError::Empty);
    }
    for b in &mut blocks {
        if b.body().is_none() {
            b.flags.push(CertFlag::Degenerate);
        }
    }
    Ok(Certificate {
        space,
        interval,
        blocks,
    })
}

pub fn load_certificate(path: impl AsRef<Path>) -> Result<Certificate, CertError> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| CertError::Io(e.to_string()))?;
    parse_certificate(&text)
}

pub fn save_certificate(cert: &Certificate, path: impl AsRef<Path>) -> Result<(), CertError> {
    std::fs::write(path.as_ref(), cert.to_string()).map_err(|e| CertError::Io(e.to_string()))
}

/// A certificate listing computed bodies, one block each.
pub fn certificate_from_bodies(
    space: Space,
    interval: Interval,
    bodies: &[(String, Polytope3)],
) -> Certificate {
    let blocks = bodies
        .iter()
        .map(|(id, b)| CertBlock {
            id: id.clone(),
            iota: false,
            pair: None,
            verts: b
                .verts()
                .iter()
                .map(|p| CertVertex {
                    raw: [fmt_rat(&p.x), fmt_rat(&p.v), fmt_rat(&p.s)],
                    value: p.clone(),
                })
                .collect(),
            flags: Vec::new(),
            comments: Vec::new(),
        })
        .collect();
    Certificate {
        space,
        interval,
        blocks,
    }
}
