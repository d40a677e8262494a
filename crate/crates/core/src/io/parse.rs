use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::map::GradedMap;
use crate::scalar::{self, Scalar};
use crate::space::{word_degree, Basis, GradedSpace, SpaceRef, Word};
use crate::symmetric::Side;
use crate::vector::Vector;

use super::{Mode, Problem, Settings, SubData, FORMAT_VERSION};

const SECTIONS: &[&str] = &[
    "settings",
    "generators",
    "differential",
    "subgenerators",
    "inclusion",
    "projection",
    "homotopy",
    "perturbation",
    "subcomplex",
    "small-subcomplex",
    "corestriction",
];

#[derive(Clone, Copy)]
struct Line<'a> {
    number: usize,
    raw: &'a str,
    text: &'a str,
}

impl<'a> Line<'a> {
    /// 1-based column of `part`, which must be a subslice of this line.
    fn column_of(&self, part: &str) -> usize {
        let offset = (part.as_ptr() as usize).saturating_sub(self.raw.as_ptr() as usize);
        let offset = offset.min(self.raw.len());
        self.raw[..offset].chars().count() + 1
    }

    fn error(&self, part: &str, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column: self.column_of(part),
            message: message.into(),
        }
    }
}

fn strip_comment(s: &str) -> &str {
    match s.find('#') {
        Some(i) => &s[..i],
        None => s,
    }
}

pub fn parse_problem(src: &str) -> Result<Problem> {
    let mut lines = src.lines().enumerate().filter_map(|(i, raw)| {
        let text = strip_comment(raw).trim();
        (!text.is_empty()).then_some(Line {
            number: i + 1,
            raw,
            text,
        })
    });
    let header = lines.next().ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: format!("empty file, expected `hpt {FORMAT_VERSION}`"),
    })?;
    let mut words = header.text.split_whitespace();
    match (words.next(), words.next(), words.next()) {
        (Some("hpt"), Some(v), None) => {
            if v.parse::<u32>().ok() != Some(FORMAT_VERSION) {
                return Err(header.error(v, format!("unsupported format version `{v}`")));
            }
        }
        _ => return Err(header.error(header.text, format!("expected header `hpt {FORMAT_VERSION}`"))),
    }

    let mut sections: HashMap<&str, (Line, Vec<Line>)> = HashMap::new();
    let mut current: Option<&str> = None;
    for line in lines {
        if let Some(rest) = line.text.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| line.error(line.text, "unterminated section header"))?
                .trim();
            let known = SECTIONS
                .iter()
                .find(|s| **s == name)
                .ok_or_else(|| line.error(rest, format!("unknown section `{name}`")))?;
            if sections.contains_key(known) {
                return Err(line.error(rest, format!("duplicate section `{name}`")));
            }
            sections.insert(known, (line, Vec::new()));
            current = Some(known);
            continue;
        }
        let Some(name) = current else {
            return Err(line.error(line.text, "content before the first section"));
        };
        sections.get_mut(name).expect("opened").1.push(line);
    }
    let body = |name: &str| sections.get(name).map(|(_, ls)| ls.as_slice());
    let header_of = |name: &str| sections.get(name).map(|(h, _)| *h);

    let settings = match body("settings") {
        Some(ls) => parse_settings(ls)?,
        None => Settings::default(),
    };
    let Some(gen_lines) = body("generators") else {
        return Err(Error::Semantic("missing [generators] section".into()));
    };
    let v = parse_space(gen_lines, "generators")?;
    let map = |name: &str, src: &SpaceRef, tgt: &SpaceRef, degree: i32| -> Result<Option<GradedMap>> {
        body(name).map(|ls| parse_map(ls, name, src, tgt, degree)).transpose()
    };
    let differential = map("differential", &v, &v, 1)?.unwrap_or_else(|| GradedMap::zero(&v, &v, 1));

    let sub = match body("subgenerators") {
        Some(ls) => {
            let w = parse_space(ls, "subgenerators")?;
            let inclusion = map("inclusion", &w, &v, 0)?
                .ok_or_else(|| Error::Semantic("[subgenerators] requires an [inclusion] section".into()))?;
            let projection = map("projection", &v, &w, 0)?
                .ok_or_else(|| Error::Semantic("[subgenerators] requires a [projection] section".into()))?;
            let homotopy = map("homotopy", &v, &v, -1)?.unwrap_or_else(|| GradedMap::zero(&v, &v, -1));
            Some(SubData {
                space: w,
                inclusion,
                projection,
                homotopy,
            })
        }
        None => {
            for name in ["inclusion", "projection", "homotopy", "small-subcomplex"] {
                if let Some(h) = header_of(name) {
                    return Err(Error::Semantic(format!(
                        "[{name}] at line {} needs a [subgenerators] section",
                        h.number
                    )));
                }
            }
            None
        }
    };
    let perturbation = map("perturbation", &v, &v, 1)?;
    let subcomplex = body("subcomplex").map(|ls| parse_vectors(ls, "subcomplex", &v)).transpose()?;
    let small_subcomplex = match (&sub, body("small-subcomplex")) {
        (Some(s), Some(ls)) => Some(parse_vectors(ls, "small-subcomplex", &s.space)?),
        _ => None,
    };
    let corestriction = body("corestriction").map(|ls| parse_corestriction(ls, &v)).transpose()?;
    Ok(Problem {
        settings,
        generators: v,
        differential,
        sub,
        perturbation,
        subcomplex,
        small_subcomplex,
        corestriction,
    })
}

fn parse_settings(lines: &[Line]) -> Result<Settings> {
    let mut s = Settings::default();
    for line in lines {
        let (key, value) = line
            .text
            .split_once('=')
            .ok_or_else(|| line.error(line.text, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let number = || {
            value
                .parse::<usize>()
                .map_err(|_| line.error(value, format!("`{key}` expects a nonnegative integer")))
        };
        match key {
            "mode" => {
                s.mode = Some(
                    Mode::from_name(value)
                        .ok_or_else(|| line.error(value, "mode is one of ordinary, relative, linfty"))?,
                )
            }
            "max-weight" => s.max_weight = Some(number()?),
            "max-iter" => s.max_iter = Some(number()?),
            "side" => {
                s.side = Some(match value {
                    "symmetric" => Side::Symmetric,
                    "tensor" => Side::Tensor,
                    _ => return Err(line.error(value, "side is one of symmetric, tensor")),
                })
            }
            _ => return Err(line.error(key, format!("unknown setting `{key}`"))),
        }
    }
    Ok(s)
}

fn valid_label(l: &str) -> bool {
    !l.is_empty()
        && !l.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+')
        && !l.contains(['⊗', '*', '→', ':', '+', '#', '[', ']', '='])
        && !l.contains("->")
}

fn parse_space(lines: &[Line], section: &str) -> Result<SpaceRef> {
    let mut components: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    for line in lines {
        let (head, labels) = line
            .text
            .split_once(':')
            .ok_or_else(|| line.error(line.text, "expected `degree N: label ...`"))?;
        let deg_str = head
            .trim()
            .strip_prefix("degree")
            .ok_or_else(|| line.error(head, "expected `degree N: label ...`"))?
            .trim();
        let deg: i32 = deg_str
            .parse()
            .map_err(|_| line.error(deg_str, format!("invalid degree `{deg_str}`")))?;
        if components.contains_key(&deg) {
            return Err(line.error(deg_str, format!("degree {deg} listed twice in [{section}]")));
        }
        let mut ls = Vec::new();
        for l in labels.split_whitespace() {
            if !valid_label(l) {
                return Err(line.error(l, format!("invalid label `{l}`")));
            }
            ls.push(l.to_string());
        }
        if ls.is_empty() {
            return Err(line.error(labels, format!("degree {deg} has no labels")));
        }
        components.insert(deg, ls);
    }
    let space = GradedSpace::new(components).map_err(|e| Error::Semantic(format!("[{section}]: {e}")))?;
    if !space.labels_globally_unique() {
        return Err(Error::Semantic(format!("labels in [{section}] must be distinct across degrees")));
    }
    Ok(space)
}

fn resolve(line: &Line, label: &str, space: &SpaceRef, section: &str) -> Result<Basis> {
    space.find(label).ok_or_else(|| {
        Error::Semantic(format!(
            "unknown label `{label}` in [{section}] at line {}, column {}",
            line.number,
            line.column_of(label)
        ))
    })
}

/// Splits `lhs → rhs : coeff` into trimmed parts.
fn split_entry<'a>(line: &Line<'a>) -> Result<(&'a str, &'a str, Scalar)> {
    let text = line.text;
    let (arrow, len) = match (text.find('→'), text.find("->")) {
        (Some(i), _) => (i, '→'.len_utf8()),
        (None, Some(i)) => (i, 2),
        (None, None) => return Err(line.error(text, "expected `source → target : coefficient`")),
    };
    let (lhs, rest) = (&text[..arrow], &text[arrow + len..]);
    let (rhs, coeff) = rest
        .rsplit_once(':')
        .ok_or_else(|| line.error(rest, "missing `: coefficient`"))?;
    let coeff = coeff.trim();
    let c = scalar::parse(coeff).ok_or_else(|| line.error(coeff, format!("invalid rational `{coeff}`")))?;
    Ok((lhs.trim(), rhs.trim(), c))
}

fn parse_map(lines: &[Line], section: &str, src: &SpaceRef, tgt: &SpaceRef, degree: i32) -> Result<GradedMap> {
    let mut entries = Vec::new();
    for line in lines {
        let (lhs, rhs, c) = split_entry(line)?;
        let s = resolve(line, lhs, src, section)?;
        let t = resolve(line, rhs, tgt, section)?;
        if t.degree != s.degree + degree {
            return Err(line.error(
                lhs,
                format!(
                    "entry {lhs} → {rhs} has degree {}, [{section}] has degree {degree}",
                    t.degree - s.degree
                ),
            ));
        }
        entries.push((s, t, c));
    }
    GradedMap::from_entries(src, tgt, degree, entries)
}

fn parse_corestriction(lines: &[Line], v: &SpaceRef) -> Result<Vec<(Word, Basis, Scalar)>> {
    let mut sums: BTreeMap<(usize, Word, Basis), Scalar> = BTreeMap::new();
    for line in lines {
        let (lhs, rhs, c) = split_entry(line)?;
        let mut word = Vec::new();
        for letter in lhs.split(['⊗', '*']) {
            word.push(resolve(line, letter.trim(), v, "corestriction")?);
        }
        if word.len() < 2 {
            return Err(line.error(lhs, "weight-1 terms belong in [differential]"));
        }
        let t = resolve(line, rhs, v, "corestriction")?;
        if t.degree != word_degree(&word) + 1 {
            return Err(line.error(lhs, format!("entry {lhs} → {rhs} does not have degree +1")));
        }
        *sums.entry((word.len(), word, t)).or_insert_with(scalar::zero) += c;
    }
    Ok(sums
        .into_iter()
        .filter(|(_, c)| !num_traits::Zero::is_zero(c))
        .map(|((_, w, t), c)| (w, t, c))
        .collect())
}

fn parse_vectors(lines: &[Line], section: &str, space: &SpaceRef) -> Result<Vec<Vector>> {
    let mut out = Vec::new();
    for line in lines {
        let mut v = Vector::new();
        if line.text != "0" {
            for term in line.text.split('+') {
                let parts: Vec<&str> = term.split_whitespace().collect();
                let (c, label) = match parts.as_slice() {
                    [label] => (scalar::one(), *label),
                    [coeff, label] => (
                        scalar::parse(coeff).ok_or_else(|| line.error(coeff, format!("invalid rational `{coeff}`")))?,
                        *label,
                    ),
                    _ => return Err(line.error(term, "expected `coefficient label`")),
                };
                v.add_term(resolve(line, label, space, section)?, c);
            }
        }
        out.push(v);
    }
    Ok(out)
}
