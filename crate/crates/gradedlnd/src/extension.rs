//! Lifting derivations across ring extensions.
//!
//! Two constructions live here. `jacobian_lift` extends a derivation of a
//! base ring A across a presentation B = A[X_1..X_n]/(f_1..f_n) whose
//! jacobian determinant maps to a unit of B; the extension is unique and is
//! computed from the adjugate system. `veronese_chart_lift` applies the same
//! idea to a degree-d Veronese subring: on a chart where some homogeneous x
//! with gcd(deg x, d) = 1 is invertible, B is obtained from the subring by
//! adjoining a root of T^d - x^d, and a derivation given on the subring
//! generators extends in closed form.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crate::arith::{coprime_in_monoid, gcd_i64, gcd_u64, lcm_of_set, rat, rat_int, Int, Rat};
use crate::derivation::{Derivation, VeroneseDerivation};
use crate::error::{Error, Result};
use crate::linalg::kernel_basis;
use crate::ring::{MonoidDirections, Monomial, Ring, RingElem, Strategy};

/// Presentation of a ring as base[X_1..X_n]/(f_1..f_n): the adjoined
/// variables are ordinary variables of the ring, each leading exactly one
/// relation. Every other variable and relation belongs to the base.
#[derive(Debug, Clone)]
pub struct EtalePresentation {
    ring: Ring,
    new_vars: Vec<usize>,
    rel_idx: Vec<usize>,
}

impl EtalePresentation {
    pub fn new(ring: Ring, new_vars: &[usize]) -> Result<Self> {
        if new_vars.is_empty() {
            return Err(Error::Domain(
                "a presentation adjoins at least one variable".into(),
            ));
        }
        let mut rel_idx = Vec::with_capacity(new_vars.len());
        for (k, &v) in new_vars.iter().enumerate() {
            if v >= ring.nvars() {
                return Err(Error::Domain("adjoined variable index out of range".into()));
            }
            if new_vars[..k].contains(&v) {
                return Err(Error::Domain("adjoined variable listed twice".into()));
            }
            let idx = ring
                .relations()
                .iter()
                .position(|r| r.leading_var == v)
                .ok_or_else(|| {
                    Error::Domain(format!(
                        "{} does not lead a defining relation",
                        ring.var_names()[v]
                    ))
                })?;
            rel_idx.push(idx);
        }
        Ok(EtalePresentation { ring, new_vars: new_vars.to_vec(), rel_idx })
    }

    pub fn from_names(ring: Ring, names: &[&str]) -> Result<Self> {
        let idx: Vec<usize> =
            names.iter().map(|n| ring.var_index(n)).collect::<Result<_>>()?;
        Self::new(ring, &idx)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn new_vars(&self) -> &[usize] {
        &self.new_vars
    }

    pub fn base_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|v| !self.new_vars.contains(v)).collect()
    }

    /// Same presentation with the rewrite order flipped; normal forms do not
    /// depend on it, so any lift computed through this copy must agree.
    pub fn with_strategy(&self, strategy: Strategy) -> Result<EtalePresentation> {
        EtalePresentation::new(self.ring.with_strategy(strategy), &self.new_vars)
    }

    fn relation_terms(&self, k: usize) -> Vec<(Monomial, Rat)> {
        self.ring.relations()[self.rel_idx[k]].full_terms(self.ring.nvars())
    }

    /// (df_i/dX_j) with entries reduced in the ring. Partials are taken on
    /// the presented terms of f_i, not on its (zero) normal form.
    pub fn jacobian(&self) -> Vec<Vec<RingElem>> {
        let n = self.new_vars.len();
        (0..n)
            .map(|i| {
                let terms = self.relation_terms(i);
                self.new_vars
                    .iter()
                    .map(|&j| partial_of_terms(&self.ring, &terms, j))
                    .collect()
            })
            .collect()
    }

    pub fn jacobian_det(&self) -> RingElem {
        det(&self.ring, &self.jacobian())
    }
}

/// Formal partial derivative of a raw term list.
fn partial_of_terms(ring: &Ring, terms: &[(Monomial, Rat)], var: usize) -> RingElem {
    let mut out: BTreeMap<Monomial, Rat> = BTreeMap::new();
    for (m, c) in terms {
        let e = m.0[var];
        if e == 0 {
            continue;
        }
        let mut exps = m.0.clone();
        exps[var] -= 1;
        let coeff = c * &rat_int(e);
        let entry = out.entry(Monomial(exps)).or_insert_with(|| rat_int(0));
        *entry = &*entry + &coeff;
    }
    ring.from_terms(out)
}

fn minor(m: &[Vec<RingElem>], row: usize, col: usize) -> Vec<Vec<RingElem>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

fn det(ring: &Ring, m: &[Vec<RingElem>]) -> RingElem {
    match m.len() {
        0 => ring.one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = ring.zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let mut t = m[0][j].mul(&det(ring, &minor(m, 0, j)));
                if j % 2 == 1 {
                    t = t.neg();
                }
                acc = acc.add(&t);
            }
            acc
        }
    }
}

/// adj[i][j] = (-1)^(i+j) * det of the minor dropping row j and column i,
/// so that M * adj = det(M) * I.
fn adjugate(ring: &Ring, m: &[Vec<RingElem>]) -> Vec<Vec<RingElem>> {
    let n = m.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = det(ring, &minor(m, j, i));
                    if (i + j) % 2 == 1 {
                        d.neg()
                    } else {
                        d
                    }
                })
                .collect()
        })
        .collect()
}

/// Extend a derivation of the base ring to the whole presented ring.
///
/// `base_images` gives one image per ring variable; adjoined variables must
/// be passed the zero image, since the lift determines them. Writing D0 for
/// the extension-by-zero and J* for the adjugate of the jacobian, the lifted
/// derivation sends X_j to det(J)^-1 times the j-th entry of -J* (D0 f_i).
/// It restricts to the given derivation exactly, and it is the only
/// extension: any extension must kill every f_i, which pins the images of
/// the X_j because det(J) is a unit.
pub fn jacobian_lift(pres: &EtalePresentation, base_images: &[RingElem]) -> Result<Derivation> {
    let ring = pres.ring();
    if base_images.len() != ring.nvars() {
        return Err(Error::Domain("one image per ring variable is required".into()));
    }
    for &v in pres.new_vars() {
        if !base_images[v].is_zero() {
            return Err(Error::Domain(format!(
                "the image of {} is determined by the lift; pass zero",
                ring.var_names()[v]
            )));
        }
    }
    let jac = pres.jacobian();
    let p = det(ring, &jac);
    let p_inv = p
        .try_invert()
        .ok_or_else(|| Error::JacobianNotUnit { determinant: p.to_string() })?;
    let n = pres.new_vars().len();
    let base = pres.base_vars();
    let d0f: Vec<RingElem> = (0..n)
        .map(|i| {
            let terms = pres.relation_terms(i);
            let mut acc = ring.zero();
            for &v in &base {
                if base_images[v].is_zero() {
                    continue;
                }
                acc = acc.add(&partial_of_terms(ring, &terms, v).mul(&base_images[v]));
            }
            acc
        })
        .collect();
    let adj = adjugate(ring, &jac);
    let mut images = base_images.to_vec();
    for (j, &xj) in pres.new_vars().iter().enumerate() {
        let mut g = ring.zero();
        for (i, rhs) in d0f.iter().enumerate() {
            g = g.sub(&adj[j][i].mul(rhs));
        }
        images[xj] = p_inv.mul(&g);
    }
    // the constructor re-checks every relation, including the base ones
    Derivation::new(ring.clone(), images)
}

/// `jacobian_lift` with images parsed from text; unlisted variables get zero.
pub fn jacobian_lift_named(
    pres: &EtalePresentation,
    pairs: &[(&str, &str)],
) -> Result<Derivation> {
    let ring = pres.ring();
    let mut images = vec![ring.zero(); ring.nvars()];
    for (name, text) in pairs {
        images[ring.var_index(name)?] = ring.parse(text)?;
    }
    jacobian_lift(pres, &images)
}

/// Homogeneous monomials whose degree is coprime to d: every ring variable
/// that qualifies, or a single composite monomial found in the degree monoid
/// when no variable does. Needs saturation index 1, otherwise no such
/// monomial exists at all.
pub fn chi_d_generators(ring: &Ring, d: u32) -> Result<Vec<RingElem>> {
    if d < 2 {
        return Err(Error::Domain("the subring index d must be at least 2".into()));
    }
    let weights = ring.weights();
    let e = gcd_i64(&weights)?;
    if e.unsigned_abs() != 1 {
        return Err(Error::NotSaturationIndexOne { e: e.unsigned_abs() });
    }
    let md = i64::from(d);
    let direct: Vec<RingElem> = (0..ring.nvars())
        .filter(|&i| gcd_u64(weights[i].unsigned_abs(), u64::from(d)) == 1)
        .map(|i| {
            let mut exps = vec![0i64; ring.nvars()];
            exps[i] = 1;
            ring.monomial(&exps, rat_int(1)).expect("unit exponent vector")
        })
        .collect();
    if !direct.is_empty() {
        return Ok(direct);
    }
    if weights.iter().all(|&w| w > 0) || weights.iter().all(|&w| w < 0) {
        let gens: Vec<u64> = weights.iter().map(|w| w.unsigned_abs()).collect();
        let wit = coprime_in_monoid(&gens, md)?;
        let exps: Vec<i64> = wit.combination.iter().map(|&c| c as i64).collect();
        return Ok(vec![ring.monomial(&exps, rat_int(1))?]);
    }
    // mixed signs: search monoid direction space by ascending total size.
    // Residues of reachable degrees form a subgroup of Z/d, so entries below
    // d already reach every residue and the search cannot run dry.
    let dirs = MonoidDirections::new(ring);
    let dw = dirs.weights(ring);
    let cap = d - 1;
    for total in 1..=(cap as usize * dw.len()) {
        for v in compositions_with_cap(dw.len(), total, cap as usize) {
            let deg: i64 = v.iter().zip(&dw).map(|(&a, &w)| a as i64 * w).sum();
            if gcd_u64(deg.unsigned_abs(), u64::from(d)) == 1 {
                let exps = dirs.to_exponents(ring, &v);
                return Ok(vec![ring.monomial(&exps, rat_int(1))?]);
            }
        }
    }
    unreachable!("a coprime degree exists whenever the saturation index is 1")
}

/// Vectors in [0, cap]^slots with the given coordinate sum, lex ascending.
pub(crate) fn compositions_with_cap(slots: usize, total: usize, cap: usize) -> Vec<Vec<u32>> {
    fn go(slots: usize, total: usize, cap: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            if total <= cap {
                acc.push(total as u32);
                out.push(acc.clone());
                acc.pop();
            }
            return;
        }
        for first in 0..=total.min(cap) {
            acc.push(first as u32);
            go(slots - 1, total - first, cap, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if slots > 0 {
        go(slots, total, cap, &mut Vec::new(), &mut out);
    }
    out
}

/// A set of generator images determines at most one derivation of the
/// subring; this checks the Leibniz constraint along an integer basis of the
/// multiplicative relations among the generators. In characteristic zero a
/// basis of the rational kernel is enough: the constraint is linear in the
/// relation vector.
pub fn verify_veronese_consistency(delta: &VeroneseDerivation) -> Result<()> {
    let ring = delta.ambient();
    let gens = &delta.generators;
    if gens.len() < 2 {
        return Ok(());
    }
    let mut exps: Vec<Vec<i64>> = Vec::with_capacity(gens.len());
    for g in gens {
        if g.term_count() != 1 {
            return Err(Error::Domain("subring generators must be monomials".into()));
        }
        exps.push(g.terms().next().expect("single term").0 .0.clone());
    }
    let rows = ring.nvars();
    let mat: Vec<Vec<Rat>> = (0..rows)
        .map(|r| (0..gens.len()).map(|c| rat_int(exps[c][r])).collect())
        .collect();
    for k in kernel_basis(&mat) {
        let denoms: Vec<Int> = k.iter().map(|r| r.denom().clone()).collect();
        let scale = Rat::from_integer(lcm_of_set(&denoms)?);
        let rel: Vec<i64> = k
            .iter()
            .map(|r| (r * &scale).to_integer().to_i64().expect("relation exponent fits i64"))
            .collect();
        let side = |positive: bool| -> RingElem {
            let mut combined = vec![0i64; rows];
            for (i, &c) in rel.iter().enumerate() {
                let c = if positive { c.max(0) } else { (-c).max(0) };
                for (t, e) in combined.iter_mut().zip(&exps[i]) {
                    *t += c * e;
                }
            }
            let mut acc = ring.zero();
            for (i, &c) in rel.iter().enumerate() {
                let c = if positive { c.max(0) } else { (-c).max(0) };
                if c == 0 {
                    continue;
                }
                let cof: Vec<i64> =
                    combined.iter().zip(&exps[i]).map(|(t, e)| t - e).collect();
                let m = ring
                    .monomial(&cof, rat_int(c))
                    .expect("combination of generator exponents is a valid monomial");
                acc = acc.add(&m.mul(&delta.images[i]));
            }
            acc
        };
        if side(true) != side(false) {
            let name = |positive: bool| {
                let mut combined = vec![0i64; rows];
                for (i, &c) in rel.iter().enumerate() {
                    let c = if positive { c.max(0) } else { (-c).max(0) };
                    for (t, e) in combined.iter_mut().zip(&exps[i]) {
                        *t += c * e;
                    }
                }
                ring.monomial_string(&Monomial(combined))
            };
            return Err(Error::Domain(format!(
                "generator images are inconsistent along {} = {}",
                name(true),
                name(false)
            )));
        }
    }
    Ok(())
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m, a.rem_euclid(m));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "inverse needs gcd(a, m) = 1");
    t.rem_euclid(m)
}

/// Extend a derivation of a degree-d Veronese subring to the whole chart.
///
/// `delta` is given on the subring generators of `x`'s chart (the ambient
/// ring of `delta`, with the support of `x` inverted). Because
/// gcd(deg x, d) = 1, the chart ring is obtained from its subring by
/// adjoining the root x of T^d - x^d, whose jacobian determinant d*x^(d-1)
/// is a unit there; the lift is the specialization
///     D(x) = delta(x^d) x^(1-d) / d,
///     D(v) = delta(v x^-j) x^j + j (v x^-j) x^(j-1) D(x),
/// where j is the residue of deg(v) against deg(x) mod d. Consistency of the
/// images is checked first, and the result is verified to restrict to
/// `delta` on every generator.
pub fn veronese_chart_lift(x: &RingElem, delta: &VeroneseDerivation) -> Result<Derivation> {
    let chart = delta.ambient().clone();
    let d = delta.d();
    if d < 2 {
        return Err(Error::Domain("chart lifting needs d at least 2".into()));
    }
    let x = chart.convert(x)?;
    if x.term_count() != 1 {
        return Err(Error::Domain("the chart element must be a single monomial".into()));
    }
    let xm = x.terms().next().expect("single term").0.clone();
    let inverted = chart.inverted();
    for (i, &e) in xm.0.iter().enumerate() {
        if e != 0 && !inverted[i] {
            return Err(Error::Domain(format!(
                "chart variable {} must be inverted first",
                chart.var_names()[i]
            )));
        }
    }
    let weights = chart.weights();
    let deg_x = xm.degree(&weights);
    if gcd_u64(deg_x.unsigned_abs(), u64::from(d)) != 1 {
        return Err(Error::NotCoprimeChart { degree: deg_x, d });
    }
    verify_veronese_consistency(delta)?;
    let x_inv = x.try_invert().expect("monomial on inverted variables");
    let md = i64::from(d);
    let dx = delta
        .apply(&x.pow(d))?
        .mul(&x_inv.pow(d - 1))
        .scale(&rat(1, md));
    let inv_degx = mod_inverse(deg_x.rem_euclid(md), md);
    let mut images = Vec::with_capacity(chart.nvars());
    for i in 0..chart.nvars() {
        let j = (weights[i].rem_euclid(md) * inv_degx).rem_euclid(md) as u32;
        let mut exps = vec![0i64; chart.nvars()];
        exps[i] = 1;
        let v = chart.monomial(&exps, rat_int(1))?;
        let w = v.mul(&x_inv.pow(j));
        let mut img = delta.apply(&w)?.mul(&x.pow(j));
        if j > 0 {
            img = img.add(&w.mul(&x.pow(j - 1)).mul(&dx).scale(&rat_int(i64::from(j))));
        }
        images.push(img);
    }
    let lift = Derivation::new(chart.clone(), images)?;
    for (g, img) in delta.generators.iter().zip(&delta.images) {
        if lift.apply(g) != *img {
            return Err(Error::Domain(format!(
                "lift does not restrict to the given derivation on {}",
                g
            )));
        }
    }
    Ok(lift)
}
