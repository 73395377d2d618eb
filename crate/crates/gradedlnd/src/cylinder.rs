//! Cylindrical elements and homogeneous locally nilpotent derivations.
//!
//! Three constructions. `dehomogenize` forms S = B/(h - 1) with its residue
//! grading mod deg(h) and the degree-0 correspondence between the
//! localization B_(h) and S. `cylinder_to_lnd` turns a cylinder witness
//! (f, t, R) with B_(f) = R[t] into a homogeneous locally nilpotent
//! derivation of the degree-d Veronese subring, d = deg f. In the other
//! direction, `lnd_to_cylindrical_candidate` extracts a homogeneous element
//! h of D(B) intersected with ker D and tries to certify that B_(h) is a
//! polynomial ring by exhibiting a slice after dehomogenization.

use std::collections::BTreeMap;

use crate::arith::{rat_int, Rat};
use crate::derivation::{
    in_kernel, kernel_projection, Derivation, NilpotencyCertificate, VeroneseDerivation,
};
use crate::error::{Error, Result};
use crate::extension::compositions_with_cap;
use crate::linalg::solve_linear;
use crate::ring::{
    degree_zero_localization_generators, veronese_generators, LocalizedElem, MonoidDirections,
    Monomial, Ring, RingElem,
};

/// Presentation of B_(f) as a polynomial ring R[t]: f homogeneous of
/// nonzero degree, t of degree 0, and the listed degree-0 elements
/// generating R. The presentation itself is supplied by the caller; only
/// cheap sanity can be checked here, the expensive confirmation is running
/// `cylinder_to_lnd` on it.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderWitness {
    pub f: RingElem,
    pub t: LocalizedElem,
    pub r_generators: Vec<LocalizedElem>,
}

impl CylinderWitness {
    pub fn new(f: RingElem, t: LocalizedElem, r_generators: Vec<LocalizedElem>) -> Result<Self> {
        let d = f
            .homogeneous_degree()
            .ok_or_else(|| Error::NotHomogeneous { degrees: component_degrees(&f) })?;
        if d == 0 || f.is_zero() {
            return Err(Error::DegreeZeroDenominator);
        }
        if t.f != f {
            return Err(Error::Domain("t must be presented over f".into()));
        }
        if t.degree() != Some(0) {
            return Err(Error::Domain("t must have weighted degree 0".into()));
        }
        for r in &r_generators {
            if r.f != f {
                return Err(Error::Domain("R generators must be presented over f".into()));
            }
            if r.degree() != Some(0) && !r.is_zero() {
                return Err(Error::Domain("R generators must have weighted degree 0".into()));
            }
        }
        Ok(CylinderWitness { f, t, r_generators })
    }

    /// Cheap evidence that t really is a new variable over R. Heuristic
    /// only: a clean bill here is not a proof.
    pub fn heuristic_notes(&self) -> Vec<String> {
        let mut notes = Vec::new();
        if self.t.as_ring_elem().map_or(false, |e| e.is_constant()) {
            notes.push("warning: t is a constant".into());
        }
        let mut clean = true;
        for r in &self.r_generators {
            if *r == self.t {
                notes.push("warning: t coincides with a listed R generator".into());
                clean = false;
            }
        }
        if clean {
            notes.push("t differs from every listed R generator".into());
        }
        notes
    }
}

fn component_degrees(e: &RingElem) -> Vec<i64> {
    e.homogeneous_components().keys().cloned().collect()
}

/// S = B/(h - 1) for homogeneous h of degree m, graded by Z/mZ: the quotient
/// map rho sends degree i into residue class i mod m, rho(h) = 1, and on
/// residue class 0 the map rho' from the degree-0 localization B_(h) is
/// bijective with inverse xi = sum of x_{mi} / h^i over the homogeneous
/// components of a lift.
#[derive(Debug, Clone)]
pub struct Dehomogenization {
    source: Ring,
    quotient: Ring,
    h: RingElem,
    m: i64,
}

impl Dehomogenization {
    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn quotient(&self) -> &Ring {
        &self.quotient
    }

    pub fn h(&self) -> &RingElem {
        &self.h
    }

    /// degree of h, signed
    pub fn degree(&self) -> i64 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.m.unsigned_abs()
    }

    /// quotient map B -> S
    pub fn rho(&self, b: &RingElem) -> RingElem {
        self.quotient.convert(b).expect("same variables")
    }

    /// Residue class of an element of S, when all its normal-form monomials
    /// agree mod m; 0 for the zero element.
    pub fn residue_class(&self, s: &RingElem) -> Option<i64> {
        let weights = self.quotient.weights();
        let m = self.m.unsigned_abs() as i64;
        let mut class = None;
        for (mono, _) in s.terms() {
            let c = mono.degree(&weights).rem_euclid(m);
            match class {
                None => class = Some(c),
                Some(prev) if prev != c => return None,
                _ => {}
            }
        }
        class.or(Some(0))
    }

    /// Inverse of rho' on residue class 0: lift term by term, split into
    /// homogeneous components x_{mi}, return sum of x_{mi} / h^i.
    pub fn rho_prime_inverse(&self, s: &RingElem) -> Result<LocalizedElem> {
        let lift = self
            .source
            .from_terms(s.terms().map(|(m, c)| (m.clone(), c.clone())).collect());
        let comps = lift.homogeneous_components();
        let mut indices = Vec::new();
        for &k in comps.keys() {
            if k.rem_euclid(self.m.abs()) != 0 {
                return Err(Error::Domain(format!(
                    "{} is not in residue class 0 (component of degree {})",
                    s, k
                )));
            }
            indices.push(k / self.m);
        }
        let p = indices.iter().cloned().max().unwrap_or(0).max(0);
        let mut numer = self.source.zero();
        for (&k, comp) in &comps {
            let i = k / self.m;
            numer = numer.add(&comp.mul(&self.h.pow((p - i) as u32)));
        }
        Ok(LocalizedElem::new(self.h.clone(), numer, p as u32))
    }

    /// Push a derivation of B with D(h) = 0 down to S.
    pub fn lift_derivation(&self, d: &Derivation) -> Result<Derivation> {
        if d.ring() != &self.source {
            return Err(Error::Domain("derivation lives on a different ring".into()));
        }
        if !d.apply(&self.h).is_zero() {
            return Err(Error::Domain(
                "h must lie in the kernel of the derivation".into(),
            ));
        }
        let images = d.images().iter().map(|e| self.rho(e)).collect();
        Derivation::new(self.quotient.clone(), images)
    }
}

/// Form B/(h - 1). Supported fragment: h - 1 must serve as a division
/// relation, i.e. be monic in some non-inverted variable; this covers every
/// single-variable power c*v^k and all the curated shapes. Other monomials
/// (such as x*y) would need variable elimination and are reported as
/// unsupported.
pub fn dehomogenize(ring: &Ring, h: &RingElem) -> Result<Dehomogenization> {
    let m = h
        .homogeneous_degree()
        .ok_or_else(|| Error::NotHomogeneous { degrees: component_degrees(h) })?;
    if m == 0 || h.is_zero() {
        return Err(Error::DegreeZeroDehomogenization);
    }
    let rel = h.sub(&ring.one());
    let mut quotient = None;
    for v in 0..ring.nvars() {
        if let Ok(q) = ring.with_extra_relation(&rel, v, false) {
            quotient = Some(q);
            break;
        }
    }
    let Some(quotient) = quotient else {
        return Err(Error::UnsupportedDenominator {
            reason: format!("{} - 1 is not monic in any variable", h),
        });
    };
    Ok(Dehomogenization { source: ring.clone(), quotient, h: h.clone(), m })
}

/// Basis monomials t^a * r_1^b_1 ... r_s^b_s of total degree <= `total`,
/// with their values in B_f, cached across calls by the caller.
type WitnessMonomial = (u32, Vec<u32>);

fn witness_value(
    w: &CylinderWitness,
    key: &WitnessMonomial,
    cache: &mut BTreeMap<WitnessMonomial, LocalizedElem>,
) -> LocalizedElem {
    if let Some(v) = cache.get(key) {
        return v.clone();
    }
    let ring = w.f.ring();
    let one = LocalizedElem::new(w.f.clone(), ring.one(), 0);
    let value = if key.0 > 0 {
        let mut prev = key.clone();
        prev.0 -= 1;
        witness_value(w, &prev, cache).mul(&w.t)
    } else if let Some(i) = key.1.iter().position(|&b| b > 0) {
        let mut prev = key.clone();
        prev.1[i] -= 1;
        witness_value(w, &prev, cache).mul(&w.r_generators[i])
    } else {
        one
    };
    cache.insert(key.clone(), value.clone());
    value
}

/// Solve target = sum c_u * t^a r^b exactly, growing the total degree up to
/// `bound`; returns the combination on success.
fn express_in_witness(
    w: &CylinderWitness,
    target: &LocalizedElem,
    bound: u32,
    cache: &mut BTreeMap<WitnessMonomial, LocalizedElem>,
) -> Option<Vec<(WitnessMonomial, Rat)>> {
    let slots = 1 + w.r_generators.len();
    for total in 0..=bound {
        let mut basis: Vec<WitnessMonomial> = Vec::new();
        for t in 0..=total {
            for v in compositions_with_cap(slots, t as usize, t as usize) {
                basis.push((v[0], v[1..].to_vec()));
            }
        }
        let values: Vec<LocalizedElem> =
            basis.iter().map(|k| witness_value(w, k, cache)).collect();
        let p = values
            .iter()
            .map(|v| v.pow)
            .chain(std::iter::once(target.pow))
            .max()
            .unwrap_or(0);
        let cleared: Vec<RingElem> = values
            .iter()
            .map(|v| v.numer.mul(&w.f.pow(p - v.pow)))
            .collect();
        let rhs_elem = target.numer.mul(&w.f.pow(p - target.pow));
        let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
        for e in cleared.iter().chain(std::iter::once(&rhs_elem)) {
            for (m, _) in e.terms() {
                let next = rows.len();
                rows.entry(m.clone()).or_insert(next);
            }
        }
        let mut mat = vec![vec![rat_int(0); basis.len()]; rows.len()];
        let mut rhs = vec![rat_int(0); rows.len()];
        for (col, e) in cleared.iter().enumerate() {
            for (m, c) in e.terms() {
                mat[rows[m]][col] = c.clone();
            }
        }
        for (m, c) in rhs_elem.terms() {
            rhs[rows[m]] = c.clone();
        }
        if let Some(sol) = solve_linear(&mat, &rhs) {
            return Some(
                basis
                    .into_iter()
                    .zip(sol)
                    .filter(|(_, c)| !num_traits::Zero::is_zero(c))
                    .collect(),
            );
        }
    }
    None
}

/// Build the homogeneous locally nilpotent derivation of B^(d), d = deg f,
/// from a cylinder witness: the derivation Delta' of the localization is
/// determined by Delta'(t) = 1 and Delta'(f) = Delta'(R) = 0, and the
/// returned derivation is f^n Delta' for the least n >= 0 clearing every
/// Veronese generator back into B^(d) (least within the reach of exact
/// division). Also checks f is in the kernel and that D(t f^m) = f^(m+n),
/// exhibiting a power of f inside D(B^(d)).
pub fn cylinder_to_lnd(
    ring: &Ring,
    w: &CylinderWitness,
    bound: u32,
) -> Result<(VeroneseDerivation, u32)> {
    if w.f.ring() != ring {
        return Err(Error::Domain("witness lives on a different ring".into()));
    }
    let d = w.f.homogeneous_degree().expect("validated at construction");
    let desc = veronese_generators(ring, d.unsigned_abs() as u32)?;
    let mut cache: BTreeMap<WitnessMonomial, LocalizedElem> = BTreeMap::new();
    // Delta'(gen) for each Veronese generator, still over f
    let mut raw: Vec<LocalizedElem> = Vec::new();
    for gen in &desc.generators {
        let j = gen.homogeneous_degree().expect("generators are monomials") / d;
        let target = LocalizedElem::new(w.f.clone(), gen.clone(), 0).times_f_power(-j);
        debug_assert_eq!(target.degree(), Some(0));
        let Some(expr) = express_in_witness(w, &target, bound, &mut cache) else {
            return Err(Error::IntegralityBoundExceeded { bound });
        };
        let mut deriv = LocalizedElem::new(w.f.clone(), ring.zero(), 0);
        for ((a, b), c) in expr {
            if a == 0 {
                continue; // no t: killed by Delta'
            }
            let term = witness_value(w, &(a - 1, b), &mut cache)
                .scale(&(&c * &rat_int(i64::from(a))));
            deriv = deriv.add(&term);
        }
        raw.push(deriv.times_f_power(j));
    }
    let n = raw.iter().map(|e| e.pow).max().unwrap_or(0);
    let images: Vec<RingElem> = raw
        .iter()
        .map(|e| {
            e.times_f_power(i64::from(n - e.pow))
                .as_ring_elem()
                .expect("denominators cleared")
        })
        .collect();
    let vd = VeroneseDerivation::new(&desc, ring, images)?;
    if !vd.apply(&w.f)?.is_zero() {
        return Err(Error::Domain("f is not in the kernel of the derivation".into()));
    }
    let beta = &w.t.numer; // t * f^m with m = w.t.pow
    let expected = w.f.pow(w.t.pow + n);
    if vd.apply(beta)? != expected {
        return Err(Error::Domain(
            "witness inconsistency: D(t f^m) differs from f^(m+n)".into(),
        ));
    }
    Ok((vd, n))
}

/// Restrict a Veronese derivation back to an ordinary one when every
/// variable already lies in B^(d); the usual route for d = 1 or for rings
/// presented directly on Veronese generators.
pub fn veronese_to_derivation(vd: &VeroneseDerivation) -> Result<Derivation> {
    let ring = vd.ambient().clone();
    let d = i64::from(vd.d());
    let mut images = Vec::with_capacity(ring.nvars());
    for (i, w) in ring.weights().iter().enumerate() {
        if w.rem_euclid(d) != 0 {
            return Err(Error::Domain(format!(
                "{} does not lie in the degree-{} subring",
                ring.var_names()[i],
                d
            )));
        }
        let mut exps = vec![0i64; ring.nvars()];
        exps[i] = 1;
        images.push(vd.apply(&ring.monomial(&exps, rat_int(1))?)?);
    }
    Derivation::new(ring, images)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateVerdict {
    Certified,
    Unverified,
    Failed,
}

impl std::fmt::Display for CandidateVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CandidateVerdict::Certified => "certified",
            CandidateVerdict::Unverified => "unverified",
            CandidateVerdict::Failed => "failed",
        };
        write!(f, "{s}")
    }
}

/// Result of the candidate search: h in D(B) and ker D of nonzero degree,
/// its preimage beta with D(beta) = h, and, when certification succeeded,
/// the cylinder witness exhibiting B_(h) as a polynomial ring.
#[derive(Debug, Clone)]
pub struct CylindricalCandidate {
    pub h: Option<RingElem>,
    pub beta: Option<RingElem>,
    pub verdict: CandidateVerdict,
    pub witness: Option<CylinderWitness>,
    pub notes: Vec<String>,
}

/// Search-bound default: no theoretical bound exists, so scale with the
/// derivation's degree and the generator degrees.
pub fn default_candidate_bound(d: &Derivation) -> u32 {
    let deg = d.homogeneous_degree().unwrap_or(0).unsigned_abs();
    let gen = d
        .ring()
        .weights()
        .iter()
        .map(|w| w.unsigned_abs())
        .max()
        .unwrap_or(1);
    ((2 * deg).max(2 * gen) as u32) * 4
}

/// Canonical monomials of the ring with the given total size in monoid
/// direction space, lex order; vectors using both directions of an inverted
/// variable are skipped as non-canonical duplicates.
fn monomials_of_size(ring: &Ring, total: usize, dirs: &MonoidDirections) -> Vec<RingElem> {
    let mut out = Vec::new();
    'vectors: for v in compositions_with_cap(dirs.dirs.len(), total, total) {
        for i in 0..ring.nvars() {
            let plus = v[i];
            let minus = dirs
                .dirs
                .iter()
                .position(|&(j, s)| j == i && s < 0)
                .map_or(0, |k| v[k]);
            if plus > 0 && minus > 0 {
                continue 'vectors;
            }
        }
        let exps = dirs.to_exponents(ring, &v);
        out.push(ring.monomial(&exps, rat_int(1)).expect("canonical exponents"));
    }
    out
}

/// One certification attempt for a fixed candidate pair (beta, h).
/// Returns the witness on success, None when the bounded search cannot
/// settle it; hard errors bubble up for the caller to log.
fn try_certify(
    dv: &Derivation,
    beta: &RingElem,
    h: &RingElem,
    kernel_pool: &[RingElem],
    bound: u32,
    notes: &mut Vec<String>,
) -> Result<Option<CylinderWitness>> {
    let ring = dv.ring();
    let dh = dehomogenize(ring, h)?;
    let dbar = dh.lift_derivation(dv)?;
    let v = dh.rho(beta);
    if !dbar.apply(&v).is_one() {
        return Err(Error::Domain("rho(beta) failed the slice identity".into()));
    }
    let m = dh.modulus() as i64;
    let e = beta
        .homogeneous_degree()
        .expect("beta is a monomial")
        .rem_euclid(m);
    let w_s = if e == 0 {
        notes.push(format!("slice rho({}) has residue class 0", beta));
        v.clone()
    } else {
        // residue class e != 0: look for a kernel element r with a scalar
        // power r^k = c; then r^p * v with p*class(r) = -e mod m generates
        // the class-0 part over ker intersect class 0.
        let mut found = None;
        'pool: for r0 in kernel_pool {
            let Some(deg_r) = dh.residue_class(&dh.rho(r0)) else { continue };
            if !dbar.apply(&dh.rho(r0)).is_zero() {
                continue;
            }
            let r = dh.rho(r0);
            let mut power = r.clone();
            for k in 2..=(m as u32).max(2) {
                power = power.mul(&r);
                if power.is_zero() {
                    continue 'pool;
                }
                if power.is_constant() {
                    for p in 1..k {
                        if (i64::from(p) * deg_r).rem_euclid(m) == (m - e).rem_euclid(m) {
                            let mut rp = dh.quotient().one();
                            for _ in 0..p {
                                rp = rp.mul(&r);
                            }
                            notes.push(format!(
                                "residue class {}: using kernel element {} with {}^{} scalar",
                                e, r0, r0, k
                            ));
                            found = Some(rp.mul(&v));
                            break 'pool;
                        }
                    }
                    continue 'pool;
                }
            }
        }
        match found {
            Some(w) => w,
            None => {
                notes.push(format!(
                    "slice class {} nonzero and no scalar-power kernel element matches",
                    e
                ));
                return Ok(None);
            }
        }
    };
    let t = dh.rho_prime_inverse(&w_s)?;
    let mut r_gens = Vec::new();
    for u in degree_zero_localization_generators(ring, h)? {
        let s0 = dh.rho(&u.numer);
        let a0 = kernel_projection(&dbar, &v, &s0, bound)?;
        if a0.is_constant() {
            continue;
        }
        let r = dh.rho_prime_inverse(&a0)?;
        if r_gens.contains(&r) || r == t {
            continue;
        }
        r_gens.push(r);
    }
    let witness = CylinderWitness::new(h.clone(), t, r_gens)?;
    notes.extend(witness.heuristic_notes());
    Ok(Some(witness))
}

/// Extract a cylindrical candidate from a homogeneous locally nilpotent
/// derivation: search D-images of monomials for a homogeneous h in ker D of
/// nonzero degree, then attempt certification through dehomogenization and
/// the slice rho(beta). When the direct attempt stalls on a nonzero residue
/// class, retry with a*h and a^2*h for a kernel seed a of nonzero degree.
/// Verdicts are three-valued; bounded search never refutes.
pub fn lnd_to_cylindrical_candidate(
    dv: &Derivation,
    cert: &NilpotencyCertificate,
    kernel_seeds: &[RingElem],
    bound: u32,
) -> Result<CylindricalCandidate> {
    let ring = dv.ring();
    if dv.is_zero() {
        return Err(Error::ZeroDerivation);
    }
    if dv.homogeneous_degree().is_none() {
        let mut degrees: Vec<i64> = Vec::new();
        for (i, img) in dv.images().iter().enumerate() {
            let w = ring.weights()[i];
            for k in img.homogeneous_components().keys() {
                let shift = k - w;
                if !degrees.contains(&shift) {
                    degrees.push(shift);
                }
            }
        }
        degrees.sort();
        return Err(Error::NotHomogeneous { degrees });
    }
    if !cert.is_nilpotent() {
        return Err(Error::Domain(
            "certification requires a locally nilpotent derivation; certify first".into(),
        ));
    }
    // split the seeds into homogeneous kernel elements
    let mut pool: Vec<RingElem> = Vec::new();
    for s in kernel_seeds {
        if !in_kernel(dv, s)? {
            return Err(Error::Domain(format!("kernel seed {} is not in the kernel", s)));
        }
        for comp in s.homogeneous_components().values() {
            if !pool.contains(comp) {
                pool.push(comp.clone());
            }
        }
    }
    let retry = pool
        .iter()
        .find(|s| s.homogeneous_degree().map_or(false, |d| d != 0))
        .cloned();
    if retry.is_none() {
        return Err(Error::KernelInDegreeZero);
    }
    let retry = retry.expect("checked above");

    let mut notes = Vec::new();
    let dirs = MonoidDirections::new(ring);
    let mut base: Option<(RingElem, RingElem)> = None;
    'search: for total in 1..=(bound as usize) {
        for mu in monomials_of_size(ring, total, &dirs) {
            let h = dv.apply(&mu);
            if h.is_zero() {
                continue;
            }
            let Some(m) = h.homogeneous_degree() else { continue };
            if m == 0 || !dv.apply(&h).is_zero() {
                continue;
            }
            base = Some((mu, h));
            break 'search;
        }
    }
    let Some((beta0, h0)) = base else {
        return Ok(CylindricalCandidate {
            h: None,
            beta: None,
            verdict: CandidateVerdict::Failed,
            witness: None,
            notes: vec![format!(
                "no monomial of size up to {} maps to a homogeneous kernel element of nonzero degree",
                bound
            )],
        });
    };
    notes.push(format!("candidate h = {} = D({})", h0, beta0));

    let mut attempts = vec![(beta0.clone(), h0.clone())];
    for power in 1..=2u32 {
        let a = retry.pow(power);
        attempts.push((a.mul(&beta0), a.mul(&h0)));
    }
    for (beta, h) in &attempts {
        if h.homogeneous_degree() == Some(0) || h.is_zero() {
            notes.push(format!("skipping candidate {} of degree 0", h));
            continue;
        }
        match try_certify(dv, beta, h, &pool, bound, &mut notes) {
            Ok(Some(witness)) => {
                return Ok(CylindricalCandidate {
                    h: Some(h.clone()),
                    beta: Some(beta.clone()),
                    verdict: CandidateVerdict::Certified,
                    witness: Some(witness),
                    notes,
                });
            }
            Ok(None) => {}
            Err(err) => {
                notes.push(format!("candidate {}: {}", h, err));
            }
        }
    }
    Ok(CylindricalCandidate {
        h: Some(h0),
        beta: Some(beta0),
        verdict: CandidateVerdict::Unverified,
        witness: None,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::certify_lnd;

    fn plane() -> Ring {
        Ring::builder().var("x", 1).var("y", 1).build().unwrap()
    }

    #[test]
    fn dehomogenize_at_a_coordinate() {
        let ring = plane();
        let h = ring.var("x").unwrap();
        let dh = dehomogenize(&ring, &h).unwrap();
        assert_eq!(dh.modulus(), 1);
        assert!(dh.rho(&h).is_one());
        let s = dh.rho(&ring.var("y").unwrap());
        let xi = dh.rho_prime_inverse(&s).unwrap();
        assert_eq!(xi.to_string(), "y / x");
        assert_eq!(xi.degree(), Some(0));
    }

    #[test]
    fn dehomogenize_at_a_square() {
        let ring = plane();
        let h = ring.parse("x^2").unwrap();
        let dh = dehomogenize(&ring, &h).unwrap();
        assert_eq!(dh.modulus(), 2);
        assert!(dh.rho(&h).is_one());
        // odd class: x stays x, class 1
        let sx = dh.rho(&ring.var("x").unwrap());
        assert_eq!(dh.residue_class(&sx), Some(1));
        assert!(dh.rho_prime_inverse(&sx).is_err());
        // class 0: x*y pulls back to x*y / x^2 = y/x
        let s = dh.rho(&ring.parse("x*y").unwrap());
        assert_eq!(dh.residue_class(&s), Some(0));
        let xi = dh.rho_prime_inverse(&s).unwrap();
        assert_eq!(xi, LocalizedElem::new(h.clone(), ring.parse("x*y").unwrap(), 1));
        // rho' . rho'^-1 is the identity on class 0
        assert_eq!(dh.rho(&xi.numer), s);
        // no nonzero homogeneous element dies under rho
        for text in ["x^2 - y^2", "x^3", "x*y + y^2", "y^4"] {
            let b = ring.parse(text).unwrap();
            assert!(!dh.rho(&b).is_zero(), "{text} died");
        }
    }

    #[test]
    fn dehomogenize_rejects_degree_zero_and_mixed_monomials() {
        let ring = plane();
        assert_eq!(
            dehomogenize(&ring, &ring.one()).unwrap_err(),
            Error::DegreeZeroDehomogenization
        );
        let err = dehomogenize(&ring, &ring.parse("x*y").unwrap()).unwrap_err();
        assert!(matches!(err, Error::UnsupportedDenominator { .. }));
    }

    #[test]
    fn derivations_descend_when_h_is_in_the_kernel() {
        let ring = plane();
        let d = Derivation::from_named_images(&ring, &[("y", "x")]).unwrap();
        let dh = dehomogenize(&ring, &ring.var("x").unwrap()).unwrap();
        let dbar = dh.lift_derivation(&d).unwrap();
        assert!(dbar.image(0).is_zero());
        assert!(dbar.image(1).is_one());
        // h outside the kernel is refused
        let euler = Derivation::from_named_images(&ring, &[("x", "x"), ("y", "y")]).unwrap();
        assert!(dh.lift_derivation(&euler).is_err());
    }

    #[test]
    fn cylinder_witness_on_the_plane_gives_the_translation() {
        let ring = plane();
        let f = ring.var("x").unwrap();
        let t = LocalizedElem::new(f.clone(), ring.var("y").unwrap(), 1);
        let w = CylinderWitness::new(f, t, Vec::new()).unwrap();
        let (vd, n) = cylinder_to_lnd(&ring, &w, 8).unwrap();
        assert_eq!(n, 0);
        let shown: Vec<String> = vd.generators.iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, vec!["y", "x"]);
        let images: Vec<String> = vd.images.iter().map(|g| g.to_string()).collect();
        assert_eq!(images, vec!["x", "0"]);
        assert!(certify_lnd(&vd, 16).unwrap().is_nilpotent());

        let d = veronese_to_derivation(&vd).unwrap();
        assert_eq!(d.image(0).to_string(), "0");
        assert_eq!(d.image(1).to_string(), "x");
    }

    #[test]
    fn cylinder_witness_on_the_second_veronese() {
        let ring = plane();
        let f = ring.parse("x^2").unwrap();
        let t = LocalizedElem::new(f.clone(), ring.parse("x*y").unwrap(), 1);
        let w = CylinderWitness::new(f, t, Vec::new()).unwrap();
        let (vd, n) = cylinder_to_lnd(&ring, &w, 8).unwrap();
        assert_eq!(n, 0);
        let shown: Vec<String> = vd.generators.iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, vec!["y^2", "x*y", "x^2"]);
        let images: Vec<String> = vd.images.iter().map(|g| g.to_string()).collect();
        assert_eq!(images, vec!["2*x*y", "x^2", "0"]);
        assert!(certify_lnd(&vd, 16).unwrap().is_nilpotent());
    }

    #[test]
    fn missing_r_generator_exceeds_the_bound() {
        let ring = Ring::builder()
            .var("x", 1)
            .var("y", 1)
            .var("z", 1)
            .build()
            .unwrap();
        let f = ring.var("x").unwrap();
        let t = LocalizedElem::new(f.clone(), ring.var("y").unwrap(), 1);
        // z/x is needed to reach the generator z but is not listed
        let w = CylinderWitness::new(f, t, Vec::new()).unwrap();
        assert_eq!(
            cylinder_to_lnd(&ring, &w, 6).unwrap_err(),
            Error::IntegralityBoundExceeded { bound: 6 }
        );
    }

    #[test]
    fn r_generators_are_respected() {
        let ring = Ring::builder()
            .var("x", 1)
            .var("y", 1)
            .var("z", 1)
            .build()
            .unwrap();
        let f = ring.var("x").unwrap();
        let t = LocalizedElem::new(f.clone(), ring.var("y").unwrap(), 1);
        let r = LocalizedElem::new(f.clone(), ring.var("z").unwrap(), 1);
        let w = CylinderWitness::new(f, t, vec![r]).unwrap();
        let (vd, n) = cylinder_to_lnd(&ring, &w, 8).unwrap();
        assert_eq!(n, 0);
        let images: Vec<String> = vd.images.iter().map(|g| g.to_string()).collect();
        // generators in lex order: z, y, x
        assert_eq!(images, vec!["0", "x", "0"]);
    }

    #[test]
    fn translation_candidate_is_certified() {
        let ring = plane();
        let d = Derivation::from_named_images(&ring, &[("y", "x")]).unwrap();
        let cert = certify_lnd(&d, 16).unwrap();
        let out =
            lnd_to_cylindrical_candidate(&d, &cert, &[ring.var("x").unwrap()], 8).unwrap();
        assert_eq!(out.verdict, CandidateVerdict::Certified);
        assert_eq!(out.h.as_ref().unwrap().to_string(), "x");
        let w = out.witness.unwrap();
        let expect = LocalizedElem::new(ring.var("x").unwrap(), ring.var("y").unwrap(), 1);
        assert_eq!(w.t, expect);
        assert!(w.r_generators.is_empty());
    }

    #[test]
    fn degree_two_image_goes_through_the_residue_case() {
        let ring = plane();
        let d = Derivation::from_named_images(&ring, &[("y", "x^2")]).unwrap();
        let cert = certify_lnd(&d, 16).unwrap();
        let out =
            lnd_to_cylindrical_candidate(&d, &cert, &[ring.var("x").unwrap()], 8).unwrap();
        assert_eq!(out.verdict, CandidateVerdict::Certified);
        assert_eq!(out.h.as_ref().unwrap().to_string(), "x^2");
        let w = out.witness.unwrap();
        // t = x*y / x^2 = y/x as a localization element
        let expect = LocalizedElem::new(
            ring.parse("x^2").unwrap(),
            ring.parse("x*y").unwrap(),
            1,
        );
        assert_eq!(w.t, expect);
        assert!(w.r_generators.is_empty());
    }

    #[test]
    fn presented_veronese_ring_round_trips() {
        let ring = Ring::builder()
            .var("X", 2)
            .var("Y", 2)
            .var("Z", 2)
            .relation("Y^2 - X*Z", "Y")
            .build()
            .unwrap();
        let d = Derivation::from_named_images(&ring, &[("Y", "X"), ("Z", "2*Y")]).unwrap();
        let cert = certify_lnd(&d, 16).unwrap();
        let out =
            lnd_to_cylindrical_candidate(&d, &cert, &[ring.var("X").unwrap()], 8).unwrap();
        assert_eq!(out.verdict, CandidateVerdict::Certified);
        assert_eq!(out.h.as_ref().unwrap().to_string(), "X");
        let w = out.witness.unwrap();
        let expect = LocalizedElem::new(ring.var("X").unwrap(), ring.var("Y").unwrap(), 1);
        assert_eq!(w.t, expect);
        assert!(w.r_generators.is_empty());

        // and the witness rebuilds a derivation matching the original
        let (vd, n) = cylinder_to_lnd(&ring, &w, 8).unwrap();
        assert_eq!(n, 0);
        let back = veronese_to_derivation(&vd).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn candidate_preconditions_are_enforced() {
        let ring = plane();
        let zero = Derivation::from_named_images(&ring, &[]).unwrap();
        let cert = NilpotencyCertificate::Nilpotent { orders: Default::default() };
        assert_eq!(
            lnd_to_cylindrical_candidate(&zero, &cert, &[], 4).unwrap_err(),
            Error::ZeroDerivation
        );
        let mixed = Derivation::from_named_images(&ring, &[("y", "x + x^2")]).unwrap();
        assert_eq!(
            lnd_to_cylindrical_candidate(&mixed, &cert, &[ring.var("x").unwrap()], 4)
                .unwrap_err(),
            Error::NotHomogeneous { degrees: vec![0, 1] }
        );
        let d = Derivation::from_named_images(&ring, &[("y", "x")]).unwrap();
        assert_eq!(
            lnd_to_cylindrical_candidate(&d, &cert, &[ring.one()], 4).unwrap_err(),
            Error::KernelInDegreeZero
        );
    }
}
