use std::fmt::Write;

use crate::map::GradedMap;
use crate::scalar;
use crate::space::SpaceRef;
use crate::vector::Vector;

use super::{side_name, Problem, FORMAT_VERSION};

fn section(out: &mut String, name: &str) {
    let _ = write!(out, "\n[{name}]\n");
}

fn write_space(out: &mut String, name: &str, space: &SpaceRef) {
    section(out, name);
    for (deg, labels) in space.components() {
        let _ = writeln!(out, "degree {deg}: {}", labels.join(" "));
    }
}

fn write_map(out: &mut String, name: &str, map: &GradedMap, always: bool) {
    let mut entries = map.entries();
    if entries.is_empty() && !always {
        return;
    }
    entries.sort();
    section(out, name);
    for (s, t, c) in entries {
        let _ = writeln!(
            out,
            "{} → {} : {}",
            map.source().label(s),
            map.target().label(t),
            scalar::format(&c)
        );
    }
}

fn write_vectors(out: &mut String, name: &str, space: &SpaceRef, vectors: &[Vector]) {
    section(out, name);
    for v in vectors {
        let _ = writeln!(out, "{}", space.render(v));
    }
}

/// The canonical text of a problem: fixed section order, entries sorted by
/// basis order and summed, coefficients in lowest terms, no comments.
pub fn format_problem(p: &Problem) -> String {
    let mut out = format!("hpt {FORMAT_VERSION}\n");
    let s = &p.settings;
    if *s != Default::default() {
        section(&mut out, "settings");
        if let Some(m) = s.mode {
            let _ = writeln!(out, "mode = {}", m.name());
        }
        if let Some(w) = s.max_weight {
            let _ = writeln!(out, "max-weight = {w}");
        }
        if let Some(n) = s.max_iter {
            let _ = writeln!(out, "max-iter = {n}");
        }
        if let Some(side) = s.side {
            let _ = writeln!(out, "side = {}", side_name(side));
        }
    }
    write_space(&mut out, "generators", &p.generators);
    write_map(&mut out, "differential", &p.differential, false);
    if let Some(sub) = &p.sub {
        write_space(&mut out, "subgenerators", &sub.space);
        write_map(&mut out, "inclusion", &sub.inclusion, true);
        write_map(&mut out, "projection", &sub.projection, true);
        write_map(&mut out, "homotopy", &sub.homotopy, false);
    }
    if let Some(d) = &p.perturbation {
        write_map(&mut out, "perturbation", d, true);
    }
    if let Some(a) = &p.subcomplex {
        write_vectors(&mut out, "subcomplex", &p.generators, a);
    }
    if let (Some(sub), Some(a)) = (&p.sub, &p.small_subcomplex) {
        write_vectors(&mut out, "small-subcomplex", &sub.space, a);
    }
    if let Some(q) = &p.corestriction {
        let mut q = q.clone();
        q.sort_by(|a, b| (a.0.len(), &a.0, a.1).cmp(&(b.0.len(), &b.0, b.1)));
        section(&mut out, "corestriction");
        for (w, t, c) in q {
            let word: Vec<&str> = w.iter().map(|b| p.generators.label(*b)).collect();
            let _ = writeln!(
                out,
                "{} → {} : {}",
                word.join("⊗"),
                p.generators.label(t),
                scalar::format(&c)
            );
        }
    }
    out
}
