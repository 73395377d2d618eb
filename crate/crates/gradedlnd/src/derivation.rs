//! Derivations of graded rings and of their Veronese subrings.
//!
//! A derivation is given by the images of the ring generators and extended
//! by linearity and the Leibniz rule. Nilpotency is certified by bounded
//! iteration: `Nilpotent` and `NotNilpotent` answers are proofs, `Unknown`
//! only reports that the bound ran out.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::arith::{hilbert_basis, rat_int, CongruenceMonoid, Rat};
use crate::error::{Error, Result};
use crate::ring::{Monomial, MonoidDirections, Ring, RingElem, VeroneseDescription};

/// Derivation of a ring presented by one image per variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    ring: Ring,
    images: Vec<RingElem>,
}

impl Derivation {
    /// Checks that the images are compatible with every relation F of the
    /// ring: D(F) must reduce to zero, otherwise D is not well defined on
    /// the quotient.
    pub fn new(ring: Ring, images: Vec<RingElem>) -> Result<Self> {
        if images.len() != ring.nvars() {
            return Err(Error::Domain(format!(
                "expected {} images, got {}",
                ring.nvars(),
                images.len()
            )));
        }
        for img in &images {
            if img.ring() != &ring {
                return Err(Error::Domain("image from a different ring".into()));
            }
        }
        let d = Derivation { ring, images };
        for rel in d.ring.relations() {
            let mut df = d.ring.zero();
            for (m, c) in rel.full_terms(d.ring.nvars()) {
                df = df.add(&d.apply_monomial(&m, &c));
            }
            if !df.is_zero() {
                let name = &d.ring.spec().vars[rel.leading_var].name;
                return Err(Error::Domain(format!(
                    "images are incompatible with the relation led by {name}: \
                     the relation maps to {df}"
                )));
            }
        }
        Ok(d)
    }

    /// Build from (variable, image) pairs; unlisted variables map to zero.
    pub fn from_named_images(ring: &Ring, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut images = vec![ring.zero(); ring.nvars()];
        for (name, text) in pairs {
            let i = ring.var_index(name)?;
            images[i] = ring.parse(text)?;
        }
        Derivation::new(ring.clone(), images)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn images(&self) -> &[RingElem] {
        &self.images
    }

    pub fn image(&self, var: usize) -> &RingElem {
        &self.images[var]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|f| f.is_zero())
    }

    fn apply_monomial(&self, m: &Monomial, c: &Rat) -> RingElem {
        let mut out = self.ring.zero();
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 || self.images[i].is_zero() {
                continue;
            }
            // power rule, valid for negative exponents on inverted variables
            let mut rest = m.clone();
            rest.0[i] = e - 1;
            let base = self
                .ring
                .from_terms(BTreeMap::from([(rest, c * rat_int(e))]));
            out = out.add(&base.mul(&self.images[i]));
        }
        out
    }

    pub fn apply(&self, f: &RingElem) -> RingElem {
        assert!(f.ring() == &self.ring, "element from a different ring");
        let mut out = self.ring.zero();
        for (m, c) in f.terms() {
            out = out.add(&self.apply_monomial(m, c));
        }
        out
    }

    /// degree k such that D maps degree i to degree i + k, when one exists
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let weights = self.ring.weights();
        let mut deg: Option<i64> = None;
        for (i, img) in self.images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let k = img.homogeneous_degree()? - weights[i];
            match deg {
                None => deg = Some(k),
                Some(d) if d == k => {}
                Some(_) => return None,
            }
        }
        deg
    }

    /// Split into graded components D = sum of D_k, keyed by k. Components
    /// of a derivation that kills a homogeneous relation kill it degreewise,
    /// so each component is again well defined.
    pub fn decompose_homogeneous(&self) -> Result<BTreeMap<i64, Derivation>> {
        let weights = self.ring.weights();
        let mut by_degree: BTreeMap<i64, Vec<RingElem>> = BTreeMap::new();
        for (i, img) in self.images.iter().enumerate() {
            for (d, comp) in img.homogeneous_components() {
                by_degree
                    .entry(d - weights[i])
                    .or_insert_with(|| vec![self.ring.zero(); self.ring.nvars()])[i] = comp;
            }
        }
        by_degree
            .into_iter()
            .map(|(k, images)| Ok((k, Derivation::new(self.ring.clone(), images)?)))
            .collect()
    }

    /// top graded component; this is the associated graded derivation
    pub fn top_homogeneous_part(&self) -> Result<Derivation> {
        let comps = self.decompose_homogeneous()?;
        comps
            .into_iter()
            .next_back()
            .map(|(_, d)| d)
            .ok_or(Error::ZeroDerivation)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.ring.var_names();
        let parts: Vec<String> = names
            .iter()
            .zip(&self.images)
            .map(|(n, img)| format!("{n} -> {img}"))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Derivation of a Veronese subring B^(d), presented by one image per
/// Veronese generator. Elements are manipulated in the ambient ring; apply
/// factors each monomial over the generator monoid and uses Leibniz. The
/// caller is responsible for the images being mutually consistent (the
/// constructors in this crate produce consistent ones and the chart lift
/// verifies consistency on a kernel basis).
#[derive(Debug, Clone)]
pub struct VeroneseDerivation {
    ambient: Ring,
    d: u32,
    dirs: MonoidDirections,
    /// full Hilbert basis in direction coordinates, including the trivial
    /// v * v^-1 pairs (their ring value is 1, their image 0)
    basis: Vec<Vec<u32>>,
    /// image per basis vector
    basis_images: Vec<RingElem>,
    /// public generators, pair vectors excluded, aligned with `images`
    pub generators: Vec<RingElem>,
    pub images: Vec<RingElem>,
}

impl VeroneseDerivation {
    pub fn new(desc: &VeroneseDescription, ring: &Ring, images: Vec<RingElem>) -> Result<Self> {
        if images.len() != desc.generators.len() {
            return Err(Error::Domain(format!(
                "expected {} generator images, got {}",
                desc.generators.len(),
                images.len()
            )));
        }
        let weights = ring.weights();
        for img in &images {
            if img.ring() != ring {
                return Err(Error::Domain("image from a different ring".into()));
            }
            for (m, _) in img.terms() {
                if m.degree(&weights).rem_euclid(desc.d as i64) != 0 {
                    return Err(Error::Domain(format!(
                        "image {img} does not lie in the degree-{} Veronese subring",
                        desc.d
                    )));
                }
            }
        }
        let dirs = MonoidDirections::new(ring);
        let monoid = CongruenceMonoid::new(dirs.weights(ring), desc.d)?;
        let basis = hilbert_basis(&monoid)?;
        let mut basis_images = Vec::with_capacity(basis.len());
        for v in &basis {
            let exps = dirs.to_exponents(ring, v);
            if exps.iter().all(|&e| e == 0) {
                basis_images.push(ring.zero());
                continue;
            }
            let idx = desc
                .exponents
                .iter()
                .position(|g| *g == exps)
                .ok_or_else(|| {
                    Error::Domain("generator list does not match the Veronese basis".into())
                })?;
            basis_images.push(images[idx].clone());
        }
        let vd = VeroneseDerivation {
            ambient: ring.clone(),
            d: desc.d,
            dirs,
            basis,
            basis_images,
            generators: desc.generators.clone(),
            images,
        };
        // a relation whose monomials sit inside B^(d) must map to zero
        for rel in ring.relations() {
            let terms = rel.full_terms(ring.nvars());
            let inside = terms
                .iter()
                .all(|(m, _)| m.degree(&weights).rem_euclid(desc.d as i64) == 0);
            if !inside {
                continue;
            }
            let mut df = ring.zero();
            for (m, c) in &terms {
                df = df.add(&vd.apply_monomial(m, c)?);
            }
            if !df.is_zero() {
                let name = &ring.spec().vars[rel.leading_var].name;
                return Err(Error::Domain(format!(
                    "generator images are incompatible with the relation led by {name}"
                )));
            }
        }
        Ok(vd)
    }

    pub fn ambient(&self) -> &Ring {
        &self.ambient
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    fn factor(&self, target: &[u32]) -> Option<Vec<u32>> {
        fn rec(basis: &[Vec<u32>], i: usize, rem: &mut Vec<u32>, out: &mut Vec<u32>) -> bool {
            if rem.iter().all(|&r| r == 0) {
                for slot in out.iter_mut().skip(i) {
                    *slot = 0;
                }
                return true;
            }
            if i == basis.len() {
                return false;
            }
            let g = &basis[i];
            let maxk = rem
                .iter()
                .zip(g)
                .filter(|(_, &gv)| gv > 0)
                .map(|(&rv, &gv)| rv / gv)
                .min()
                .unwrap_or(0);
            for k in (0..=maxk).rev() {
                for (rv, &gv) in rem.iter_mut().zip(g) {
                    *rv -= k * gv;
                }
                out[i] = k;
                if rec(basis, i + 1, rem, out) {
                    return true;
                }
                for (rv, &gv) in rem.iter_mut().zip(g) {
                    *rv += k * gv;
                }
            }
            false
        }
        let mut rem = target.to_vec();
        let mut out = vec![0u32; self.basis.len()];
        rec(&self.basis, 0, &mut rem, &mut out).then_some(out)
    }

    fn apply_monomial(&self, m: &Monomial, c: &Rat) -> Result<RingElem> {
        let target = self.dirs.from_exponents(&m.0);
        let combo = self.factor(&target).ok_or_else(|| {
            Error::Domain(format!(
                "monomial {} does not lie in the degree-{} Veronese subring",
                self.ambient.monomial_string(m),
                self.d
            ))
        })?;
        let mut out = self.ambient.zero();
        for (gi, &k) in combo.iter().enumerate() {
            if k == 0 || self.basis_images[gi].is_zero() {
                continue;
            }
            let mut rest_dirs = target.clone();
            for (rv, &gv) in rest_dirs.iter_mut().zip(&self.basis[gi]) {
                *rv -= gv;
            }
            let rest = Monomial(self.dirs.to_exponents(&self.ambient, &rest_dirs));
            let base = self
                .ambient
                .from_terms(BTreeMap::from([(rest, c * rat_int(k as i64))]));
            out = out.add(&base.mul(&self.basis_images[gi]));
        }
        Ok(out)
    }

    pub fn apply(&self, f: &RingElem) -> Result<RingElem> {
        assert!(f.ring() == &self.ambient, "element from a different ring");
        let mut out = self.ambient.zero();
        for (m, c) in f.terms() {
            out = out.add(&self.apply_monomial(m, c)?);
        }
        Ok(out)
    }

    /// degree as a map on the ambient grading, when homogeneous
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut deg: Option<i64> = None;
        for (g, img) in self.generators.iter().zip(&self.images) {
            if img.is_zero() {
                continue;
            }
            let k = img.homogeneous_degree()? - g.homogeneous_degree()?;
            match deg {
                None => deg = Some(k),
                Some(d) if d == k => {}
                Some(_) => return None,
            }
        }
        deg
    }
}

impl fmt::Display for VeroneseDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .generators
            .iter()
            .zip(&self.images)
            .map(|(g, img)| format!("{g} -> {img}"))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Common interface for nilpotency certification and kernel tests.
pub trait DerivationLike {
    fn base_ring(&self) -> &Ring;
    fn apply_any(&self, f: &RingElem) -> Result<RingElem>;
    /// elements that generate the ring as a Q-algebra, with display names
    fn probe_elements(&self) -> Vec<(String, RingElem)>;
}

impl DerivationLike for Derivation {
    fn base_ring(&self) -> &Ring {
        &self.ring
    }

    fn apply_any(&self, f: &RingElem) -> Result<RingElem> {
        Ok(self.apply(f))
    }

    fn probe_elements(&self) -> Vec<(String, RingElem)> {
        let mut out = Vec::new();
        for (i, v) in self.ring.spec().vars.iter().enumerate() {
            let mut exps = vec![0i64; self.ring.nvars()];
            exps[i] = 1;
            out.push((
                v.name.clone(),
                self.ring.monomial(&exps, rat_int(1)).expect("valid var"),
            ));
        }
        // inverses generate too: nilpotency on the u alone says nothing
        // about u^-1
        for (i, v) in self.ring.spec().vars.iter().enumerate() {
            if v.inverted {
                let mut exps = vec![0i64; self.ring.nvars()];
                exps[i] = -1;
                out.push((
                    format!("{}^-1", v.name),
                    self.ring.monomial(&exps, rat_int(1)).expect("valid inverse"),
                ));
            }
        }
        out
    }
}

impl DerivationLike for VeroneseDerivation {
    fn base_ring(&self) -> &Ring {
        &self.ambient
    }

    fn apply_any(&self, f: &RingElem) -> Result<RingElem> {
        self.apply(f)
    }

    fn probe_elements(&self) -> Vec<(String, RingElem)> {
        // inverse directions are already among the Veronese generators
        self.generators
            .iter()
            .map(|g| (format!("{g}"), g.clone()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NilpotencyCertificate {
    /// least n with D^n(g) = 0, per probe element
    Nilpotent { orders: BTreeMap<String, u32> },
    /// D(w) = eigenvalue * w with a nonzero eigenvalue: never nilpotent
    NotNilpotent { witness: String, eigenvalue: Rat },
    /// iteration bound exhausted without a verdict
    Unknown { bound: u32 },
}

impl NilpotencyCertificate {
    pub fn is_nilpotent(&self) -> bool {
        matches!(self, NilpotencyCertificate::Nilpotent { .. })
    }
}

impl fmt::Display for NilpotencyCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NilpotencyCertificate::Nilpotent { orders } => {
                let parts: Vec<String> =
                    orders.iter().map(|(n, k)| format!("{n}: {k}")).collect();
                write!(f, "nilpotent ({})", parts.join(", "))
            }
            NilpotencyCertificate::NotNilpotent { witness, eigenvalue } => {
                write!(f, "not nilpotent: D({witness}) = {eigenvalue}*({witness})")
            }
            NilpotencyCertificate::Unknown { bound } => {
                write!(f, "unknown at bound {bound}")
            }
        }
    }
}

/// Certify local nilpotency by iterating D on each probe element. An
/// eigenvector with nonzero eigenvalue refutes nilpotency outright.
pub fn certify_lnd(d: &impl DerivationLike, bound: u32) -> Result<NilpotencyCertificate> {
    let mut orders = BTreeMap::new();
    for (name, start) in d.probe_elements() {
        let mut v = start;
        let mut n = 0u32;
        loop {
            if v.is_zero() {
                orders.insert(name, n);
                break;
            }
            if n >= bound {
                return Ok(NilpotencyCertificate::Unknown { bound });
            }
            let dv = d.apply_any(&v)?;
            if !dv.is_zero() {
                if let Some(q) = dv.divide_exact(&v) {
                    if let Some(c) = q.constant_value() {
                        if !c.is_zero() {
                            return Ok(NilpotencyCertificate::NotNilpotent {
                                witness: format!("{v}"),
                                eigenvalue: c,
                            });
                        }
                    }
                }
            }
            v = dv;
            n += 1;
        }
    }
    Ok(NilpotencyCertificate::Nilpotent { orders })
}

pub fn in_kernel(d: &impl DerivationLike, f: &RingElem) -> Result<bool> {
    Ok(d.apply_any(f)?.is_zero())
}

/// e written as a polynomial in a slice s with kernel coefficients:
/// e = sum of coefficients[i] * s^i.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceDecomposition {
    pub s: RingElem,
    pub coefficients: Vec<RingElem>,
}

/// Dixmier projection onto the kernel along the slice:
/// pi(b) = sum_j (-1)^j s^j D^j(b) / j!.
/// A ring homomorphism fixing ker D, with pi(s) = 0; requires D(s) = 1.
pub fn kernel_projection(
    d: &Derivation,
    s: &RingElem,
    b: &RingElem,
    bound: u32,
) -> Result<RingElem> {
    let ring = d.ring().clone();
    let mut out = ring.zero();
    let mut cur = b.clone();
    let mut s_pow = ring.one();
    let mut fact = rat_int(1);
    let mut sign = rat_int(1);
    let mut j = 0u32;
    while !cur.is_zero() {
        if j > bound {
            return Err(Error::NilpotencyUnverified);
        }
        let coef = &sign / &fact;
        out = out.add(&s_pow.mul(&cur).scale(&coef));
        cur = d.apply(&cur);
        s_pow = s_pow.mul(s);
        sign = -sign;
        j += 1;
        fact = fact * rat_int(j as i64);
    }
    Ok(out)
}

/// Decompose e over a slice: requires D(s) = 1; the coefficients land in
/// ker D and reconstruct e exactly. Fails with NilpotencyUnverified when
/// the D-orbit of e does not terminate within the bound.
pub fn slice_decompose(
    d: &Derivation,
    s: &RingElem,
    e: &RingElem,
    bound: u32,
) -> Result<SliceDecomposition> {
    if !d.apply(s).is_one() {
        return Err(Error::NotASlice);
    }
    let mut iterates = vec![e.clone()];
    while !iterates.last().unwrap().is_zero() {
        if iterates.len() as u32 > bound {
            return Err(Error::NilpotencyUnverified);
        }
        let next = d.apply(iterates.last().unwrap());
        iterates.push(next);
    }
    iterates.pop();
    let mut coefficients = Vec::with_capacity(iterates.len());
    let mut fact = rat_int(1);
    for (i, v) in iterates.iter().enumerate() {
        if i > 0 {
            fact = fact * rat_int(i as i64);
        }
        let a = kernel_projection(d, s, v, bound)?.scale(&(rat_int(1) / &fact));
        debug_assert!(d.apply(&a).is_zero(), "projection left the kernel");
        coefficients.push(a);
    }
    // the reconstruction identity is the whole point; check it always
    let ring = d.ring().clone();
    let mut recon = ring.zero();
    let mut s_pow = ring.one();
    for a in &coefficients {
        recon = recon.add(&a.mul(&s_pow));
        s_pow = s_pow.mul(s);
    }
    if recon != *e {
        return Err(Error::Domain(
            "slice decomposition failed to reconstruct the input".into(),
        ));
    }
    Ok(SliceDecomposition { s: s.clone(), coefficients })
}
