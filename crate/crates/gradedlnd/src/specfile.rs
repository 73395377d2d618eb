//! Line-oriented spec files describing a graded ring together with optional
//! derivations, Veronese derivations, cylinder witnesses and kernel seeds.
//!
//! ```text
//! ring
//!   var x 1            # var <name> <weight>
//!   inverted u -2      # a unit of the ring
//!   relation Y^2 - X*Z leading Y
//!   assert domain
//! end
//!
//! derivation D
//!   y -> x^2
//! end
//! ```
//!
//! Blocks close with `end`; `#` starts a comment. The ring block comes
//! first; `derivation`, `veronese-derivation` and `witness` blocks take an
//! optional name. Unknown block kinds and unknown keys are rejected with a
//! line/column diagnostic, and `render_spec` prints a canonical form that
//! parses back to an equal `SpecFile`.

use crate::cylinder::CylinderWitness;
use crate::derivation::{Derivation, VeroneseDerivation};
use crate::ring::{
    veronese_generators, AssertedFlag, LocalizedElem, Relation, Ring, RingElem,
    VeroneseDescription,
};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SpecFile {
    pub ring: Ring,
    pub derivations: Vec<(String, Derivation)>,
    pub veronese: Vec<(String, VeroneseDerivation)>,
    pub witnesses: Vec<(String, CylinderWitness)>,
    pub kernel_seeds: Vec<RingElem>,
}

impl SpecFile {
    pub fn first_derivation(&self) -> Result<&Derivation> {
        self.derivations
            .first()
            .map(|(_, d)| d)
            .ok_or_else(|| Error::Domain("the spec file declares no derivation block".into()))
    }

    pub fn first_veronese(&self) -> Result<&VeroneseDerivation> {
        self.veronese.first().map(|(_, v)| v).ok_or_else(|| {
            Error::Domain("the spec file declares no veronese-derivation block".into())
        })
    }

    pub fn first_witness(&self) -> Result<&CylinderWitness> {
        self.witnesses
            .first()
            .map(|(_, w)| w)
            .ok_or_else(|| Error::Domain("the spec file declares no witness block".into()))
    }
}

impl PartialEq for SpecFile {
    fn eq(&self, other: &Self) -> bool {
        fn vd_eq(a: &VeroneseDerivation, b: &VeroneseDerivation) -> bool {
            a.d() == b.d()
                && a.ambient() == b.ambient()
                && a.generators == b.generators
                && a.images == b.images
        }
        self.ring == other.ring
            && self.derivations == other.derivations
            && self.veronese.len() == other.veronese.len()
            && self
                .veronese
                .iter()
                .zip(&other.veronese)
                .all(|((n1, v1), (n2, v2))| n1 == n2 && vd_eq(v1, v2))
            && self.witnesses == other.witnesses
            && self.kernel_seeds == other.kernel_seeds
    }
}

/// One nonempty input line after comment stripping. `body` is the trimmed
/// text; `indent` restores original column numbers in diagnostics.
struct Line<'a> {
    no: usize,
    indent: usize,
    body: &'a str,
}

fn logical_lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let body = content.trim_end();
        let trimmed = body.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        out.push(Line { no: i + 1, indent: body.len() - trimmed.len(), body: trimmed });
    }
    out
}

/// 1-based column of `s`, which must be a subslice of `line.body`.
fn col_of(line: &Line, s: &str) -> usize {
    line.indent + (s.as_ptr() as usize - line.body.as_ptr() as usize) + 1
}

fn perr(line: &Line, s: &str, msg: impl Into<String>) -> Error {
    Error::Parse { line: line.no, col: col_of(line, s), msg: msg.into() }
}

/// Re-anchor an element parse error at the element's position in the file.
/// Non-parse errors pass through untouched.
fn relocate(line: &Line, s: &str, e: Error) -> Error {
    match e {
        Error::Parse { col, msg, .. } => {
            Error::Parse { line: line.no, col: col_of(line, s) + col - 1, msg }
        }
        other => other,
    }
}

/// Rest of the line after a leading token, with surrounding space removed.
fn rest_after<'a>(l: &Line<'a>, key: &str) -> &'a str {
    let start = key.as_ptr() as usize - l.body.as_ptr() as usize + key.len();
    l.body[start..].trim_start()
}

fn split_arrow<'a>(l: &Line<'a>) -> Result<(&'a str, &'a str)> {
    let p = l
        .body
        .find("->")
        .ok_or_else(|| perr(l, l.body, "expected '<name> -> <element>'"))?;
    let lhs = l.body[..p].trim();
    let rhs = l.body[p + 2..].trim();
    if lhs.is_empty() || lhs.contains(char::is_whitespace) {
        return Err(perr(l, l.body, "left side of -> must be a single name"));
    }
    if rhs.is_empty() {
        return Err(perr(l, l.body, "missing element after ->"));
    }
    Ok((lhs, rhs))
}

fn split_over<'a>(l: &Line<'a>, rest: &'a str) -> Result<(&'a str, u32)> {
    let p = rest
        .rfind(" over ")
        .ok_or_else(|| perr(l, rest, "expected '<element> over <power>'"))?;
    let numer = rest[..p].trim_end();
    let ptok = rest[p + " over ".len()..].trim();
    let pow: u32 = ptok
        .parse()
        .map_err(|_| perr(l, ptok, format!("invalid power {ptok}")))?;
    Ok((numer, pow))
}

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let lines = logical_lines(text);
    let mut ring: Option<Ring> = None;
    let mut derivations = Vec::new();
    let mut veronese = Vec::new();
    let mut witnesses = Vec::new();
    let mut kernel_seeds: Vec<RingElem> = Vec::new();

    let mut i = 0;
    while i < lines.len() {
        let header = &lines[i];
        let mut toks = header.body.split_whitespace();
        let kind = toks.next().expect("logical lines are nonempty");
        let name = toks.next();
        if let Some(extra) = toks.next() {
            return Err(perr(header, extra, "unexpected token after block header"));
        }
        let mut j = i + 1;
        let mut body: Vec<&Line> = Vec::new();
        loop {
            if j >= lines.len() {
                return Err(perr(header, kind, format!("{kind} block is not closed with end")));
            }
            if lines[j].body == "end" {
                break;
            }
            body.push(&lines[j]);
            j += 1;
        }
        if let Some(n) = name {
            if kind == "ring" || kind == "kernel-seeds" {
                return Err(perr(header, n, format!("the {kind} block takes no name")));
            }
        }
        let block_name = name.unwrap_or("").to_string();
        let require_ring = |r: &Option<Ring>| -> Result<Ring> {
            r.clone().ok_or_else(|| {
                perr(header, kind, format!("the ring block must come before {kind}"))
            })
        };
        match kind {
            "ring" => {
                if ring.is_some() {
                    return Err(perr(header, kind, "duplicate ring block"));
                }
                ring = Some(parse_ring_block(header, &body)?);
            }
            "derivation" => {
                let r = require_ring(&ring)?;
                derivations.push((block_name, parse_derivation_block(&r, &body)?));
            }
            "veronese-derivation" => {
                let r = require_ring(&ring)?;
                veronese.push((block_name, parse_veronese_block(&r, header, &body)?));
            }
            "witness" => {
                let r = require_ring(&ring)?;
                witnesses.push((block_name, parse_witness_block(&r, header, &body)?));
            }
            "kernel-seeds" => {
                let r = require_ring(&ring)?;
                for l in &body {
                    kernel_seeds.push(r.parse(l.body).map_err(|e| relocate(l, l.body, e))?);
                }
            }
            other => {
                return Err(perr(header, other, format!("unknown block kind {other}")));
            }
        }
        i = j + 1;
    }
    let ring = ring
        .ok_or_else(|| Error::Parse { line: 1, col: 1, msg: "missing ring block".into() })?;
    Ok(SpecFile { ring, derivations, veronese, witnesses, kernel_seeds })
}

fn parse_ring_block(header: &Line, lines: &[&Line]) -> Result<Ring> {
    let mut b = Ring::builder();
    let mut saw_var = false;
    // relations are applied after every variable is declared, so a relation
    // line may reference variables introduced further down the block
    let mut relations: Vec<(&Line, &str, &str)> = Vec::new();
    for l in lines {
        let mut toks = l.body.split_whitespace();
        let key = toks.next().expect("nonempty");
        match key {
            "var" | "inverted" => {
                let name = toks
                    .next()
                    .ok_or_else(|| perr(l, key, format!("{key} needs a name and a weight")))?;
                let wtok = toks
                    .next()
                    .ok_or_else(|| perr(l, name, format!("{key} {name} needs a weight")))?;
                if let Some(x) = toks.next() {
                    return Err(perr(l, x, "unexpected token after weight"));
                }
                let w: i64 = wtok
                    .parse()
                    .map_err(|_| perr(l, wtok, format!("invalid weight {wtok}")))?;
                b = if key == "inverted" { b.inverted_var(name, w) } else { b.var(name, w) };
                saw_var = true;
            }
            "relation" => {
                let rest = rest_after(l, key);
                let p = rest
                    .rfind(" leading ")
                    .ok_or_else(|| perr(l, rest, "expected '<poly> leading <variable>'"))?;
                let poly = rest[..p].trim_end();
                let lead = rest[p + " leading ".len()..].trim();
                if lead.is_empty() || lead.contains(char::is_whitespace) {
                    return Err(perr(l, rest, "leading variable must be a single name"));
                }
                relations.push((l, poly, lead));
            }
            "assert" => {
                let ftok = toks
                    .next()
                    .ok_or_else(|| perr(l, key, "assert needs a flag name"))?;
                if let Some(x) = toks.next() {
                    return Err(perr(l, x, "unexpected token after assert flag"));
                }
                let flag = AssertedFlag::parse(ftok)
                    .ok_or_else(|| perr(l, ftok, format!("unknown assert flag {ftok}")))?;
                b = b.assert_flag(flag);
            }
            other => {
                return Err(perr(l, other, format!("unknown key {other} in ring block")));
            }
        }
    }
    if !saw_var {
        return Err(perr(header, header.body, "ring block declares no variables"));
    }
    let mut ring = b.build()?;
    for (l, poly, lead) in relations {
        let f = ring.parse(poly).map_err(|e| relocate(l, poly, e))?;
        let idx = ring.var_index(lead)?;
        ring = ring.with_extra_relation(&f, idx, true)?;
    }
    Ok(ring)
}

fn parse_derivation_block(ring: &Ring, lines: &[&Line]) -> Result<Derivation> {
    let mut images = vec![ring.zero(); ring.nvars()];
    let mut seen = vec![false; ring.nvars()];
    for l in lines {
        let (lhs, rhs) = split_arrow(l)?;
        let idx = ring.var_index(lhs)?;
        if seen[idx] {
            return Err(perr(l, lhs, format!("duplicate image for {lhs}")));
        }
        seen[idx] = true;
        images[idx] = ring.parse(rhs).map_err(|e| relocate(l, rhs, e))?;
    }
    Derivation::new(ring.clone(), images)
}

fn generator_index(desc: &VeroneseDescription, key: &RingElem) -> Option<usize> {
    desc.generators.iter().position(|g| g == key)
}

fn parse_veronese_block(
    ring: &Ring,
    header: &Line,
    lines: &[&Line],
) -> Result<VeroneseDerivation> {
    let mut d: Option<u32> = None;
    let mut pairs: Vec<(&Line, &str, &str)> = Vec::new();
    for l in lines {
        let mut toks = l.body.split_whitespace();
        let key = toks.next().expect("nonempty");
        if key == "d" {
            let v = toks.next().ok_or_else(|| perr(l, key, "d needs a value"))?;
            if let Some(x) = toks.next() {
                return Err(perr(l, x, "unexpected token after d"));
            }
            if d.is_some() {
                return Err(perr(l, key, "duplicate d line"));
            }
            d = Some(
                v.parse()
                    .map_err(|_| perr(l, v, format!("invalid d value {v}")))?,
            );
        } else {
            pairs.push({
                let (lhs, rhs) = split_arrow(l)?;
                (l, lhs, rhs)
            });
        }
    }
    let d = d.ok_or_else(|| {
        perr(header, header.body, "veronese-derivation block needs a d line")
    })?;
    let desc = veronese_generators(ring, d)?;
    let mut images = vec![ring.zero(); desc.generators.len()];
    let mut seen = vec![false; desc.generators.len()];
    for (l, lhs, rhs) in pairs {
        let key = ring.parse(lhs).map_err(|e| relocate(l, lhs, e))?;
        let idx = generator_index(&desc, &key).ok_or_else(|| {
            perr(l, lhs, format!("{lhs} is not a generator of the degree-{d} subring"))
        })?;
        if seen[idx] {
            return Err(perr(l, lhs, format!("duplicate image for {lhs}")));
        }
        seen[idx] = true;
        images[idx] = ring.parse(rhs).map_err(|e| relocate(l, rhs, e))?;
    }
    VeroneseDerivation::new(&desc, ring, images)
}

fn parse_witness_block(
    ring: &Ring,
    header: &Line,
    lines: &[&Line],
) -> Result<CylinderWitness> {
    let mut f: Option<RingElem> = None;
    let mut t: Option<(&Line, &str, u32)> = None;
    let mut rs: Vec<(&Line, &str, u32)> = Vec::new();
    for l in lines {
        let mut toks = l.body.split_whitespace();
        let key = toks.next().expect("nonempty");
        let rest = rest_after(l, key);
        match key {
            "f" => {
                if f.is_some() {
                    return Err(perr(l, key, "duplicate f line"));
                }
                f = Some(ring.parse(rest).map_err(|e| relocate(l, rest, e))?);
            }
            "t" => {
                if t.is_some() {
                    return Err(perr(l, key, "duplicate t line"));
                }
                let (numer, pow) = split_over(l, rest)?;
                t = Some((l, numer, pow));
            }
            "r" => {
                let (numer, pow) = split_over(l, rest)?;
                rs.push((l, numer, pow));
            }
            other => {
                return Err(perr(l, other, format!("unknown key {other} in witness block")));
            }
        }
    }
    let f = f.ok_or_else(|| perr(header, header.body, "witness block needs an f line"))?;
    let (tl, tn, tp) =
        t.ok_or_else(|| perr(header, header.body, "witness block needs a t line"))?;
    let t = LocalizedElem::new(
        f.clone(),
        ring.parse(tn).map_err(|e| relocate(tl, tn, e))?,
        tp,
    );
    let mut r_generators = Vec::new();
    for (l, n, p) in rs {
        r_generators.push(LocalizedElem::new(
            f.clone(),
            ring.parse(n).map_err(|e| relocate(l, n, e))?,
            p,
        ));
    }
    CylinderWitness::new(f, t, r_generators)
}

/// The relation's presented terms rendered back to text. Printed in a
/// relation-free copy of the ring, where the terms are plain monomials.
fn relation_text(ring: &Ring, rel: &Relation) -> String {
    let mut b = Ring::builder();
    for v in &ring.spec().vars {
        b = if v.inverted {
            b.inverted_var(&v.name, v.weight)
        } else {
            b.var(&v.name, v.weight)
        };
    }
    let free = b.build().expect("variable list was already validated");
    free.from_terms(rel.full_terms(ring.nvars()).into_iter().collect())
        .to_string()
}

fn push_block_header(out: &mut String, kind: &str, name: &str) {
    if name.is_empty() {
        out.push_str(kind);
    } else {
        out.push_str(kind);
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
}

/// Canonical text form: `parse_spec(render_spec(sf))` equals `sf`. Zero
/// images are omitted; every element prints in normal form.
pub fn render_spec(sf: &SpecFile) -> String {
    let mut out = String::new();
    out.push_str("ring\n");
    for v in &sf.ring.spec().vars {
        let kw = if v.inverted { "inverted" } else { "var" };
        out.push_str(&format!("  {kw} {} {}\n", v.name, v.weight));
    }
    for rel in sf.ring.relations() {
        out.push_str(&format!(
            "  relation {} leading {}\n",
            relation_text(&sf.ring, rel),
            sf.ring.spec().vars[rel.leading_var].name
        ));
    }
    for flag in AssertedFlag::all() {
        if sf.ring.asserted(flag) {
            out.push_str(&format!("  assert {}\n", flag.name()));
        }
    }
    out.push_str("end\n");

    for (name, der) in &sf.derivations {
        out.push('\n');
        push_block_header(&mut out, "derivation", name);
        for (v, img) in sf.ring.spec().vars.iter().zip(der.images()) {
            if !img.is_zero() {
                out.push_str(&format!("  {} -> {img}\n", v.name));
            }
        }
        out.push_str("end\n");
    }

    for (name, vd) in &sf.veronese {
        out.push('\n');
        push_block_header(&mut out, "veronese-derivation", name);
        out.push_str(&format!("  d {}\n", vd.d()));
        for (g, img) in vd.generators.iter().zip(&vd.images) {
            if !img.is_zero() {
                out.push_str(&format!("  {g} -> {img}\n"));
            }
        }
        out.push_str("end\n");
    }

    for (name, w) in &sf.witnesses {
        out.push('\n');
        push_block_header(&mut out, "witness", name);
        out.push_str(&format!("  f {}\n", w.f));
        out.push_str(&format!("  t {} over {}\n", w.t.numer, w.t.pow));
        for r in &w.r_generators {
            out.push_str(&format!("  r {} over {}\n", r.numer, r.pow));
        }
        out.push_str("end\n");
    }

    if !sf.kernel_seeds.is_empty() {
        out.push('\n');
        out.push_str("kernel-seeds\n");
        for s in &sf.kernel_seeds {
            out.push_str(&format!("  {s}\n"));
        }
        out.push_str("end\n");
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLANE: &str = "ring\n  var x 1\n  var y 1\nend\n";

    #[test]
    fn minimal_ring_parses() {
        let sf = parse_spec(PLANE).unwrap();
        assert_eq!(sf.ring.var_names(), vec!["x", "y"]);
        assert_eq!(sf.ring.weights(), vec![1, 1]);
        assert!(sf.derivations.is_empty());
    }

    #[test]
    fn relations_asserts_and_comments() {
        let text = "# a cone\nring\n  var X 2\n  var Y 2   # middle generator\n  var Z 2\n  relation Y^2 - X*Z leading Y\n  assert domain\n  assert normal\nend\n";
        let sf = parse_spec(text).unwrap();
        assert!(sf.ring.asserted(AssertedFlag::Domain));
        assert!(sf.ring.asserted(AssertedFlag::Normal));
        assert!(!sf.ring.asserted(AssertedFlag::GeneratorsPrime));
        let y2 = sf.ring.parse("Y^2").unwrap();
        let xz = sf.ring.parse("X*Z").unwrap();
        assert_eq!(y2, xz);
    }

    #[test]
    fn derivation_block_builds_images() {
        let text = format!("{PLANE}\nderivation D\n  y -> x^2\nend\n");
        let sf = parse_spec(&text).unwrap();
        assert_eq!(sf.derivations.len(), 1);
        assert_eq!(sf.derivations[0].0, "D");
        let d = sf.first_derivation().unwrap();
        assert_eq!(d.apply(&sf.ring.parse("y").unwrap()).to_string(), "x^2");
        assert!(d.apply(&sf.ring.parse("x").unwrap()).is_zero());
    }

    #[test]
    fn veronese_block_maps_generators() {
        let text = format!(
            "{PLANE}\nveronese-derivation V\n  d 2\n  y^2 -> 2*x*y\n  x*y -> x^2\nend\n"
        );
        let sf = parse_spec(&text).unwrap();
        let vd = sf.first_veronese().unwrap();
        assert_eq!(vd.d(), 2);
        let strs: Vec<String> = vd.generators.iter().map(|g| g.to_string()).collect();
        assert_eq!(strs, vec!["y^2", "x*y", "x^2"]);
        let imgs: Vec<String> = vd.images.iter().map(|g| g.to_string()).collect();
        assert_eq!(imgs, vec!["2*x*y", "x^2", "0"]);
    }

    #[test]
    fn witness_and_seed_blocks() {
        let text = format!(
            "{PLANE}\nwitness W\n  f x\n  t y over 1\n  r y^2 over 2\nend\n\nkernel-seeds\n  x\n  x^2\nend\n"
        );
        let sf = parse_spec(&text).unwrap();
        let w = sf.first_witness().unwrap();
        assert_eq!(w.f.to_string(), "x");
        assert_eq!(w.t, LocalizedElem::new(w.f.clone(), sf.ring.parse("y").unwrap(), 1));
        assert_eq!(w.r_generators.len(), 1);
        assert_eq!(sf.kernel_seeds.len(), 2);
    }

    #[test]
    fn rich_file_round_trips() {
        let text = "ring\n  inverted u -2\n  var X 2\n  var Y 2\n  var Z 2\n  relation Y^2 - X*Z leading Y\n  assert domain\nend\n\nderivation\n  Y -> X\n  Z -> 2*Y\nend\n\nwitness\n  f X\n  t Y over 1\nend\n\nkernel-seeds\n  X\nend\n";
        let once = parse_spec(text).unwrap();
        let printed = render_spec(&once);
        let twice = parse_spec(&printed).unwrap();
        assert_eq!(once, twice);
        // canonical form is a fixed point of parse-then-print
        assert_eq!(printed, render_spec(&twice));
    }

    #[test]
    fn unknown_key_is_rejected_with_position() {
        let text = "ring\n  var x 1\n  vur y 1\nend\n";
        match parse_spec(text) {
            Err(Error::Parse { line, col, msg }) => {
                assert_eq!(line, 3);
                assert_eq!(col, 3);
                assert!(msg.contains("vur"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_block_and_unterminated_block() {
        match parse_spec("ring\n  var x 1\nend\n\nwibble\nend\n") {
            Err(Error::Parse { line, msg, .. }) => {
                assert_eq!(line, 5);
                assert!(msg.contains("wibble"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_spec("ring\n  var x 1\n") {
            Err(Error::Parse { line, msg, .. }) => {
                assert_eq!(line, 1);
                assert!(msg.contains("not closed"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn undeclared_variable_in_derivation() {
        let text = format!("{PLANE}\nderivation\n  w -> x\nend\n");
        match parse_spec(&text) {
            Err(Error::UnknownVariable { name }) => assert_eq!(name, "w"),
            other => panic!("expected UnknownVariable, got {other:?}"),
        }
    }

    #[test]
    fn inhomogeneous_relation_reports_degrees() {
        let text = "ring\n  var x 1\n  var y 3\n  relation y^2 - x^3 leading y\nend\n";
        match parse_spec(text) {
            Err(Error::Domain(msg)) => {
                assert!(msg.contains("not homogeneous"), "{msg}");
                assert!(msg.contains('3') && msg.contains('6'), "{msg}");
            }
            other => panic!("expected inhomogeneity error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_blocks_and_images_are_rejected() {
        assert!(matches!(
            parse_spec("ring\n  var x 1\nend\nring\n  var y 1\nend\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        let text = format!("{PLANE}\nderivation\n  x -> y\n  x -> 0\nend\n");
        assert!(matches!(parse_spec(&text), Err(Error::Parse { line: 8, .. })));
    }

    #[test]
    fn derivation_before_ring_is_rejected() {
        match parse_spec("derivation\n  x -> 0\nend\n") {
            Err(Error::Parse { line: 1, msg, .. }) => {
                assert!(msg.contains("ring block must come before"), "{msg}");
            }
            other => panic!("expected ordering error, got {other:?}"),
        }
    }

    #[test]
    fn relation_leading_clause_required() {
        let text = "ring\n  var x 1\n  var y 1\n  relation y^2 - x^2\nend\n";
        match parse_spec(text) {
            Err(Error::Parse { line: 4, msg, .. }) => {
                assert!(msg.contains("leading"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
