//! Command-line front-end: load a spec file, run one operation, print a
//! deterministic key/value report.
//!
//! Exit codes: 0 when the operation succeeded and every hypothesis it
//! relied on was verified; 1 on a domain error; 2 on a parse error (file,
//! element text, or command line); 3 when the operation completed but the
//! result rests on asserted or unverified hypotheses, or a search came
//! back without a certificate.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{analyze_ring, pb_analyze, PBRing, PiSet, SaturationReport};
use crate::cylinder::{
    cylinder_to_lnd, default_candidate_bound, dehomogenize, lnd_to_cylindrical_candidate,
    veronese_to_derivation, CandidateVerdict,
};
use crate::derivation::{certify_lnd, slice_decompose, Derivation, NilpotencyCertificate};
use crate::extension::{chi_d_generators, jacobian_lift_named, EtalePresentation, veronese_chart_lift};
use crate::report::{Format, Report};
use crate::ring::{veronese_generators, RingElem};
use crate::specfile::{parse_spec, SpecFile};
use crate::{Error, Result, DEFAULT_BOUND};

pub const BOUND_ENV: &str = "GRADEDLND_BOUND";

fn format_from_str(s: &str) -> std::result::Result<Format, String> {
    Format::parse(s).ok_or_else(|| format!("expected 'text' or 'structured', got '{s}'"))
}

#[derive(Debug, Parser)]
#[command(name = "gradedlnd", version, about = "Exact computations with graded rings, Veronese subrings and locally nilpotent derivations")]
pub struct Cli {
    /// Report rendering: 'text' (key = value) or 'structured' (key=value)
    #[arg(long, global = true, default_value = "text", value_parser = format_from_str)]
    pub format: Format,
    /// Iteration bound for nilpotency certificates and searches
    /// (default: GRADEDLND_BOUND environment variable, then 64)
    #[arg(long, global = true)]
    pub bound: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SpecArg {
    /// Path to a spec file
    pub spec: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Saturation analysis of the ring in a spec file
    Analyze(SpecArg),
    /// Saturation analysis of a Pham-Brieskorn ring from its exponents
    Pb {
        /// Exponents a_1 .. a_n (at least three)
        #[arg(required = true, num_args = 1..)]
        exponents: Vec<u64>,
    },
    /// Generators of the Veronese subring B^(d)
    Veronese {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        d: u32,
    },
    /// Homogeneous monomials of degree coprime to d
    ChiD {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        d: u32,
    },
    /// Extend a base derivation through relations with unit Jacobian
    Lift {
        #[command(flatten)]
        spec: SpecArg,
        /// Base images as VAR=ELEMENT (repeatable); unlisted variables map to 0
        #[arg(long = "image", value_name = "VAR=ELEMENT")]
        images: Vec<String>,
        /// Variables adjoined by the relations (default: every relation's
        /// leading variable)
        #[arg(long, value_delimiter = ',')]
        adjoin: Vec<String>,
    },
    /// Lift a Veronese derivation to a chart where a variable is invertible
    ChartLift {
        #[command(flatten)]
        spec: SpecArg,
        /// Chart variable; must be inverted in the ring and have degree
        /// coprime to d
        #[arg(long)]
        x: String,
    },
    /// Certify a derivation locally nilpotent (or refute it)
    LndCheck(SpecArg),
    /// Decompose an element along a slice: e = sum c_j s^j with c_j in ker D
    Slice {
        #[command(flatten)]
        spec: SpecArg,
        /// Slice element, D(s) = 1
        #[arg(long)]
        s: String,
        /// Element to decompose
        #[arg(long)]
        e: String,
    },
    /// Quotient by h - 1 and report the residue grading
    Dehomogenize {
        #[command(flatten)]
        spec: SpecArg,
        /// Homogeneous element of nonzero degree
        #[arg(long)]
        h: String,
        /// Optional class-0 element of the quotient to pull back to B_(h)
        #[arg(long)]
        invert: Option<String>,
    },
    /// Build a homogeneous derivation from a cylinder witness
    CylinderToLnd(SpecArg),
    /// Search a homogeneous LND for a cylindrical structure certificate
    LndToCylinder(SpecArg),
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.exit_code() == 0 { 0 } else { 2 };
        }
    };
    match execute(&cli) {
        Ok((report, code)) => {
            print!("{}", report.render(cli.format));
            code
        }
        Err(err) => {
            eprintln!("error[{}]: {err}", err.name());
            if matches!(err, Error::Parse { .. }) {
                2
            } else {
                1
            }
        }
    }
}

fn load(path: &Path) -> Result<SpecFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text)
}

/// --bound flag, then the GRADEDLND_BOUND environment variable, then the
/// library default.
fn resolve_bound(cli_bound: Option<u32>) -> Result<u32> {
    if let Some(b) = cli_bound {
        return Ok(b);
    }
    match std::env::var(BOUND_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("invalid {BOUND_ENV} value '{v}'"))),
        Err(_) => Ok(DEFAULT_BOUND),
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn elem_degree(e: &RingElem) -> String {
    let comps = e.homogeneous_components();
    match comps.len() {
        0 => "0".into(),
        1 => comps.keys().next().unwrap().to_string(),
        _ => "mixed".into(),
    }
}

fn saturation_keys(rep: &SaturationReport, out: &mut Report) {
    out.set("degrees", join(&rep.d_list));
    out.set("e", rep.e_b);
    out.set("e-invariants", join(&rep.e_list));
    out.set("e-set", &rep.e_set);
    out.set("pi", rep.pi.render());
    out.set("pi-exact", matches!(rep.pi, PiSet::Exact(_)));
    out.set("saturated-codim1", rep.saturated_codim1);
    out.set("pointwise-saturated", rep.pointwise_saturated);
    if rep.failing_pairs.is_empty() {
        out.set("failing-pairs", "none");
    } else {
        let pairs: Vec<String> = rep
            .failing_pairs
            .iter()
            .map(|(i, j)| format!("({i},{j})"))
            .collect();
        out.set("failing-pairs", pairs.join(" "));
    }
    for h in &rep.hypotheses_log {
        let key = h.name.replace(' ', "-");
        out.set(format!("hypothesis.{key}"), format!("{}: {}", h.status, h.detail));
    }
    out.set("verified", rep.fully_verified());
}

fn certificate_keys(cert: &NilpotencyCertificate, out: &mut Report) {
    match cert {
        NilpotencyCertificate::Nilpotent { orders } => {
            out.set("certificate", "nilpotent");
            for (name, n) in orders {
                out.set(format!("order.{name}"), n);
            }
        }
        NilpotencyCertificate::NotNilpotent { witness, eigenvalue } => {
            out.set("certificate", "not-nilpotent");
            out.set("witness", witness);
            out.set("eigenvalue", eigenvalue);
        }
        NilpotencyCertificate::Unknown { bound } => {
            out.set("certificate", "unknown");
            out.set("certificate-bound", bound);
        }
    }
}

/// The derivation a spec file puts forward: the first derivation block, or
/// the first veronese-derivation block restricted back to the ring.
fn spec_derivation(sf: &SpecFile) -> Result<Derivation> {
    if let Ok(d) = sf.first_derivation() {
        return Ok(d.clone());
    }
    if let Ok(vd) = sf.first_veronese() {
        return veronese_to_derivation(vd);
    }
    Err(Error::Domain(
        "the spec file declares no derivation or veronese-derivation block".into(),
    ))
}

fn execute(cli: &Cli) -> Result<(Report, i32)> {
    let bound = resolve_bound(cli.bound)?;
    let mut out = Report::new();
    match &cli.command {
        Command::Analyze(arg) => {
            let sf = load(&arg.spec)?;
            let rep = analyze_ring(&sf.ring)?;
            saturation_keys(&rep, &mut out);
            let code = if rep.fully_verified() { 0 } else { 3 };
            Ok((out, code))
        }
        Command::Pb { exponents } => {
            let pb = PBRing::new(exponents.clone())?;
            let rep = pb_analyze(&pb)?;
            out.set("exponents", join(pb.exponents()));
            out.set("lcm", pb.lcm()?);
            saturation_keys(&rep, &mut out);
            let code = if rep.fully_verified() { 0 } else { 3 };
            Ok((out, code))
        }
        Command::Veronese { spec, d } => {
            let sf = load(&spec.spec)?;
            let desc = veronese_generators(&sf.ring, *d)?;
            out.set("d", d);
            out.set("count", desc.generators.len());
            out.set_list("generator", &desc.generators);
            out.set_list(
                "degree",
                desc.generators.iter().map(elem_degree),
            );
            Ok((out, 0))
        }
        Command::ChiD { spec, d } => {
            let sf = load(&spec.spec)?;
            let gens = chi_d_generators(&sf.ring, *d)?;
            out.set("d", d);
            out.set("count", gens.len());
            out.set_list("generator", &gens);
            out.set_list("degree", gens.iter().map(elem_degree));
            Ok((out, 0))
        }
        Command::Lift { spec, images, adjoin } => {
            let sf = load(&spec.spec)?;
            let names: Vec<&str> = if adjoin.is_empty() {
                sf.ring
                    .relations()
                    .iter()
                    .map(|r| sf.ring.spec().vars[r.leading_var].name.as_str())
                    .collect()
            } else {
                adjoin.iter().map(|s| s.as_str()).collect()
            };
            let pres = EtalePresentation::from_names(sf.ring.clone(), &names)?;
            let mut pairs = Vec::new();
            for item in images {
                let (var, elem) = item.split_once('=').ok_or_else(|| {
                    Error::Domain(format!("--image needs VAR=ELEMENT, got '{item}'"))
                })?;
                pairs.push((var.trim(), elem.trim()));
            }
            let lifted = jacobian_lift_named(&pres, &pairs)?;
            out.set("new-vars", names.join(", "));
            out.set("jacobian-det", pres.jacobian_det());
            for (v, img) in sf.ring.var_names().iter().zip(lifted.images()) {
                out.set(format!("image.{v}"), img);
            }
            Ok((out, 0))
        }
        Command::ChartLift { spec, x } => {
            let sf = load(&spec.spec)?;
            let vd = sf.first_veronese()?;
            let xe = sf.ring.parse(x)?;
            let lifted = veronese_chart_lift(&xe, vd)?;
            out.set("d", vd.d());
            out.set("chart", &xe);
            for (v, img) in sf.ring.var_names().iter().zip(lifted.images()) {
                out.set(format!("image.{v}"), img);
            }
            certificate_keys(&certify_lnd(&lifted, bound)?, &mut out);
            Ok((out, 0))
        }
        Command::LndCheck(arg) => {
            let sf = load(&arg.spec)?;
            let cert = if let Ok(d) = sf.first_derivation() {
                certify_lnd(d, bound)?
            } else {
                certify_lnd(sf.first_veronese()?, bound)?
            };
            certificate_keys(&cert, &mut out);
            let code = if matches!(cert, NilpotencyCertificate::Unknown { .. }) { 3 } else { 0 };
            Ok((out, code))
        }
        Command::Slice { spec, s, e } => {
            let sf = load(&spec.spec)?;
            let der = sf.first_derivation()?;
            let se = sf.ring.parse(s)?;
            let ee = sf.ring.parse(e)?;
            let dec = slice_decompose(der, &se, &ee, bound)?;
            out.set("s", &dec.s);
            out.set("count", dec.coefficients.len());
            out.set_list("coefficient", &dec.coefficients);
            Ok((out, 0))
        }
        Command::Dehomogenize { spec, h, invert } => {
            let sf = load(&spec.spec)?;
            let he = sf.ring.parse(h)?;
            let de = dehomogenize(&sf.ring, &he)?;
            out.set("h", de.h());
            out.set("degree", de.degree());
            out.set("modulus", de.modulus());
            for v in sf.ring.var_names() {
                let img = de.rho(&sf.ring.parse(v)?);
                let class = de
                    .residue_class(&img)
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| "mixed".into());
                out.set(format!("class.{v}"), class);
            }
            if let Some(text) = invert {
                let s = de.quotient().parse(text)?;
                let lifted = de.rho_prime_inverse(&s)?;
                out.set("inverse-of", &s);
                out.set("inverse", lifted);
            }
            Ok((out, 0))
        }
        Command::CylinderToLnd(arg) => {
            let sf = load(&arg.spec)?;
            let w = sf.first_witness()?;
            let (vd, n) = cylinder_to_lnd(&sf.ring, w, bound)?;
            out.set("f", &w.f);
            out.set("t", &w.t);
            out.set("d", vd.d());
            out.set("n", n);
            out.set_list("generator", &vd.generators);
            out.set_list("image", &vd.images);
            let cert = certify_lnd(&vd, bound)?;
            certificate_keys(&cert, &mut out);
            let code = if cert.is_nilpotent() { 0 } else { 3 };
            Ok((out, code))
        }
        Command::LndToCylinder(arg) => {
            let sf = load(&arg.spec)?;
            let der = spec_derivation(&sf)?;
            let cert = certify_lnd(&der, bound)?;
            certificate_keys(&cert, &mut out);
            let search_bound = match cli.bound {
                Some(b) => b,
                None => default_candidate_bound(&der),
            };
            // listed seeds first, then every variable the derivation kills
            let mut seeds = sf.kernel_seeds.clone();
            for (i, img) in der.images().iter().enumerate() {
                let v = der.ring().var(&der.ring().var_names()[i])?;
                if img.is_zero() && !seeds.contains(&v) {
                    seeds.push(v);
                }
            }
            let cand = lnd_to_cylindrical_candidate(&der, &cert, &seeds, search_bound)?;
            out.set("verdict", cand.verdict);
            out.set("search-bound", search_bound);
            match &cand.h {
                Some(h) => out.set("h", h),
                None => out.set("h", "none"),
            }
            if let Some(beta) = &cand.beta {
                out.set("beta", beta);
            }
            if let Some(w) = &cand.witness {
                out.set("f", &w.f);
                out.set("t", &w.t);
                out.set("r-count", w.r_generators.len());
                out.set_list("r", &w.r_generators);
            }
            out.set_list("note", &cand.notes);
            let code = if cand.verdict == CandidateVerdict::Certified { 0 } else { 3 };
            Ok((out, code))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_resolution_prefers_flag() {
        assert_eq!(resolve_bound(Some(7)).unwrap(), 7);
    }

    #[test]
    fn command_names_follow_kebab_case() {
        use clap::CommandFactory;
        let cmd = Cli::command();
        let names: Vec<&str> = cmd.get_subcommands().map(|c| c.get_name()).collect();
        for expect in [
            "analyze",
            "pb",
            "veronese",
            "chi-d",
            "lift",
            "chart-lift",
            "lnd-check",
            "slice",
            "dehomogenize",
            "cylinder-to-lnd",
            "lnd-to-cylinder",
        ] {
            assert!(names.contains(&expect), "missing subcommand {expect}");
        }
    }
}
