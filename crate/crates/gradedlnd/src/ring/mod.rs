//! Z-graded polynomial rings over Q with optional inverted (Laurent)
//! variables and quotients by relations that are monic, up to a scalar, in a
//! designated leading variable.
//!
//! Elements are kept in a canonical normal form: the remainder of iterated
//! division by the relations. Relations must have pairwise distinct leading
//! variables and an acyclic "leading variable mentions" graph; under a
//! lexicographic order ranking leading variables compatibly, the relation
//! set has pairwise coprime leading monomials, so division computes a unique
//! remainder no matter which reducible term is rewritten first. Equality of
//! ring elements is equality of normal forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::arith::{hilbert_basis, minimal_kernel_solutions, rat_int, CongruenceMonoid, Rat};
use crate::error::{Error, Result};

mod parse;
pub use parse::{parse_polynomial, RawTerm};

/// Exponent vector over the ring's variables; negative entries are only
/// allowed on inverted variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn degree(&self, weights: &[i64]) -> i64 {
        let d: i128 = self
            .0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i128 * w as i128)
            .sum();
        i64::try_from(d).expect("degree fits in i64")
    }

    /// sum of absolute exponents, the size used by bounded searches
    pub fn total_size(&self) -> i64 {
        self.0.iter().map(|e| e.abs()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    pub weight: i64,
    pub inverted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AssertedFlag {
    Domain,
    Normal,
    RelationIrreducible,
    GeneratorsPrime,
    GeneratorsNonAssociate,
}

impl AssertedFlag {
    pub fn name(self) -> &'static str {
        match self {
            AssertedFlag::Domain => "domain",
            AssertedFlag::Normal => "normal",
            AssertedFlag::RelationIrreducible => "relation-irreducible",
            AssertedFlag::GeneratorsPrime => "generators-prime",
            AssertedFlag::GeneratorsNonAssociate => "generators-non-associate",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "domain" => Some(AssertedFlag::Domain),
            "normal" => Some(AssertedFlag::Normal),
            "relation-irreducible" => Some(AssertedFlag::RelationIrreducible),
            "generators-prime" => Some(AssertedFlag::GeneratorsPrime),
            "generators-non-associate" => Some(AssertedFlag::GeneratorsNonAssociate),
            _ => None,
        }
    }

    pub fn all() -> [AssertedFlag; 5] {
        [
            AssertedFlag::Domain,
            AssertedFlag::Normal,
            AssertedFlag::RelationIrreducible,
            AssertedFlag::GeneratorsPrime,
            AssertedFlag::GeneratorsNonAssociate,
        ]
    }
}

/// relation = lead_coeff * v^lead_exp + tail, used as the rewrite rule
/// v^lead_exp -> -tail / lead_coeff
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub leading_var: usize,
    pub lead_exp: i64,
    pub lead_coeff: Rat,
    pub tail: Vec<(Monomial, Rat)>,
    /// weighted degree when the relation is homogeneous
    pub degree: Option<i64>,
}

impl Relation {
    pub fn full_terms(&self, nvars: usize) -> Vec<(Monomial, Rat)> {
        let mut lead = Monomial::one(nvars);
        lead.0[self.leading_var] = self.lead_exp;
        let mut out = vec![(lead, self.lead_coeff.clone())];
        out.extend(self.tail.iter().cloned());
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradedRingSpec {
    pub vars: Vec<VarSpec>,
    pub relations: Vec<Relation>,
    pub asserted: BTreeSet<AssertedFlag>,
}

/// Which reducible term a division step rewrites first. Normal forms do not
/// depend on the choice; the second strategy exists so that callers can
/// re-run a computation with permuted rewrite order and assert identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    HighFirst,
    LowFirst,
}

/// Shared handle to a ring presentation; all element constructors live here.
#[derive(Debug, Clone)]
pub struct Ring {
    spec: Arc<GradedRingSpec>,
    strategy: Strategy,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec
    }
}

pub struct RingBuilder {
    vars: Vec<VarSpec>,
    relations: Vec<(String, String)>,
    asserted: BTreeSet<AssertedFlag>,
}

impl RingBuilder {
    pub fn var(mut self, name: &str, weight: i64) -> Self {
        self.vars.push(VarSpec { name: name.into(), weight, inverted: false });
        self
    }

    pub fn inverted_var(mut self, name: &str, weight: i64) -> Self {
        self.vars.push(VarSpec { name: name.into(), weight, inverted: true });
        self
    }

    /// quotient relation as polynomial text plus the designated leading variable
    pub fn relation(mut self, poly: &str, leading: &str) -> Self {
        self.relations.push((poly.into(), leading.into()));
        self
    }

    pub fn assert_flag(mut self, flag: AssertedFlag) -> Self {
        self.asserted.insert(flag);
        self
    }

    pub fn build(self) -> Result<Ring> {
        let mut names = BTreeSet::new();
        for v in &self.vars {
            if v.weight == 0 {
                return Err(Error::Domain(format!(
                    "variable {} has weight 0; the degree-0 part must stay Q",
                    v.name
                )));
            }
            if !names.insert(v.name.clone()) {
                return Err(Error::Domain(format!("duplicate variable {}", v.name)));
            }
        }
        if self.vars.is_empty() {
            return Err(Error::Domain("a ring needs at least one variable".into()));
        }
        let mut ring = Ring {
            spec: Arc::new(GradedRingSpec {
                vars: self.vars,
                relations: Vec::new(),
                asserted: self.asserted,
            }),
            strategy: Strategy::default(),
        };
        for (poly, leading) in self.relations {
            let f = ring.parse(&poly)?;
            let lead = ring.var_index(&leading)?;
            ring = ring.with_extra_relation(&f, lead, true)?;
        }
        Ok(ring)
    }
}

impl Ring {
    pub fn builder() -> RingBuilder {
        RingBuilder { vars: Vec::new(), relations: Vec::new(), asserted: BTreeSet::new() }
    }

    pub fn spec(&self) -> &GradedRingSpec {
        &self.spec
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn with_strategy(&self, strategy: Strategy) -> Ring {
        Ring { spec: Arc::clone(&self.spec), strategy }
    }

    pub fn nvars(&self) -> usize {
        self.spec.vars.len()
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.spec.vars.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.spec.vars.iter().map(|v| v.weight).collect()
    }

    pub fn inverted(&self) -> Vec<bool> {
        self.spec.vars.iter().map(|v| v.inverted).collect()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.spec
            .vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable { name: name.into() })
    }

    pub fn asserted(&self, flag: AssertedFlag) -> bool {
        self.spec.asserted.contains(&flag)
    }

    pub fn zero(&self) -> RingElem {
        RingElem { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> RingElem {
        self.constant(rat_int(1))
    }

    pub fn constant(&self, c: Rat) -> RingElem {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(self.nvars()), c);
        }
        RingElem { ring: self.clone(), terms }
    }

    pub fn var(&self, name: &str) -> Result<RingElem> {
        let i = self.var_index(name)?;
        let mut exps = vec![0i64; self.nvars()];
        exps[i] = 1;
        self.monomial(&exps, rat_int(1))
    }

    pub fn monomial(&self, exps: &[i64], coeff: Rat) -> Result<RingElem> {
        if exps.len() != self.nvars() {
            return Err(Error::Domain("exponent vector length mismatch".into()));
        }
        for (e, v) in exps.iter().zip(&self.spec.vars) {
            if *e < 0 && !v.inverted {
                return Err(Error::Domain(format!(
                    "negative exponent on non-inverted variable {}",
                    v.name
                )));
            }
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(Monomial(exps.to_vec()), coeff);
        }
        Ok(self.from_terms(terms))
    }

    pub fn from_terms(&self, terms: BTreeMap<Monomial, Rat>) -> RingElem {
        let reduced = reduce_terms(&self.spec, terms, self.strategy);
        RingElem { ring: self.clone(), terms: reduced }
    }

    pub fn parse(&self, text: &str) -> Result<RingElem> {
        let raw = parse_polynomial(text)?;
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for t in raw {
            let mut exps = vec![0i64; self.nvars()];
            for (name, e) in &t.powers {
                let i = self.var_index(name)?;
                exps[i] += e;
            }
            for (e, v) in exps.iter().zip(&self.spec.vars) {
                if *e < 0 && !v.inverted {
                    return Err(Error::Domain(format!(
                        "negative exponent on non-inverted variable {}",
                        v.name
                    )));
                }
            }
            let m = Monomial(exps);
            let c = terms.remove(&m).unwrap_or_else(|| rat_int(0)) + t.coeff;
            if !c.is_zero() {
                terms.insert(m, c);
            }
        }
        Ok(self.from_terms(terms))
    }

    /// reinterpret an element of a ring with the same variables (names and
    /// weights) under this ring's relations and inversion flags
    pub fn convert(&self, e: &RingElem) -> Result<RingElem> {
        let ours = &self.spec.vars;
        let theirs = &e.ring.spec.vars;
        if ours.len() != theirs.len()
            || ours
                .iter()
                .zip(theirs)
                .any(|(a, b)| a.name != b.name || a.weight != b.weight)
        {
            return Err(Error::Domain("rings have different variables".into()));
        }
        for (m, _) in &e.terms {
            for (exp, v) in m.0.iter().zip(ours) {
                if *exp < 0 && !v.inverted {
                    return Err(Error::Domain(format!(
                        "element has negative exponent on non-inverted variable {}",
                        v.name
                    )));
                }
            }
        }
        Ok(self.from_terms(e.terms.clone()))
    }

    /// same presentation with extra variables marked inverted
    pub fn with_inverted(&self, vars: &[usize]) -> Result<Ring> {
        let mut spec = (*self.spec).clone();
        for &i in vars {
            for r in &spec.relations {
                if r.leading_var == i {
                    return Err(Error::Domain(format!(
                        "cannot invert {}: it is the leading variable of a relation",
                        spec.vars[i].name
                    )));
                }
            }
            spec.vars[i].inverted = true;
        }
        Ok(Ring { spec: Arc::new(spec), strategy: self.strategy })
    }

    /// Add a relation. `require_homogeneous` is on for user-supplied ring
    /// presentations; internal constructions (dehomogenization) pass false.
    pub fn with_extra_relation(
        &self,
        poly: &RingElem,
        leading_var: usize,
        require_homogeneous: bool,
    ) -> Result<Ring> {
        assert!(self == &e_ring(poly), "relation parsed in a different ring");
        if poly.is_zero() {
            return Err(Error::Domain("relation must be nonzero".into()));
        }
        if self.spec.vars[leading_var].inverted {
            return Err(Error::Domain("leading variable must not be inverted".into()));
        }
        for r in &self.spec.relations {
            if r.leading_var == leading_var {
                return Err(Error::Domain(
                    "relations must have distinct leading variables".into(),
                ));
            }
        }
        for (m, _) in &poly.terms {
            if m.0.iter().any(|&e| e < 0) {
                return Err(Error::Domain(
                    "relation polynomials must have nonnegative exponents".into(),
                ));
            }
        }
        let lead_exp = poly
            .terms
            .keys()
            .map(|m| m.0[leading_var])
            .max()
            .expect("nonzero poly");
        if lead_exp < 1 {
            return Err(Error::Domain(format!(
                "relation does not involve its leading variable {}",
                self.spec.vars[leading_var].name
            )));
        }
        let mut lead_coeff = None;
        let mut tail = Vec::new();
        for (m, c) in &poly.terms {
            if m.0[leading_var] == lead_exp {
                if m.0.iter().enumerate().any(|(i, &e)| i != leading_var && e != 0) {
                    return Err(Error::Domain(
                        "relation is not monic in its leading variable: \
                         the top power carries other variables"
                            .into(),
                    ));
                }
                if lead_coeff.is_some() {
                    unreachable!("two monomials with the same exponent vector");
                }
                lead_coeff = Some(c.clone());
            } else {
                tail.push((m.clone(), c.clone()));
            }
        }
        let degree = {
            let comps = poly.homogeneous_components();
            if comps.len() == 1 {
                Some(*comps.keys().next().unwrap())
            } else {
                if require_homogeneous {
                    let degs: Vec<i64> = comps.keys().cloned().collect();
                    return Err(Error::Domain(format!(
                        "relation is not homogeneous: component degrees {degs:?}"
                    )));
                }
                None
            }
        };
        let rel = Relation {
            leading_var,
            lead_exp,
            lead_coeff: lead_coeff.expect("lead term exists"),
            tail,
            degree,
        };
        let mut spec = (*self.spec).clone();
        spec.relations.push(rel);
        check_relation_graph(&spec)?;
        Ok(Ring { spec: Arc::new(spec), strategy: self.strategy })
    }

    pub fn relations(&self) -> &[Relation] {
        &self.spec.relations
    }

    pub fn monomial_string(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.spec.vars[i].name.clone()
                } else {
                    format!("{}^{}", self.spec.vars[i].name, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

fn e_ring(e: &RingElem) -> Ring {
    e.ring.clone()
}

/// leading variables must not (transitively) rewrite into themselves
fn check_relation_graph(spec: &GradedRingSpec) -> Result<()> {
    let leads: Vec<usize> = spec.relations.iter().map(|r| r.leading_var).collect();
    // edge lead(r) -> lead(s) when the tail of r mentions lead(s)
    let mentions = |r: &Relation, v: usize| r.tail.iter().any(|(m, _)| m.0[v] != 0);
    let n = leads.len();
    // depth-first cycle check on at most a handful of relations
    fn visit(
        i: usize,
        spec: &GradedRingSpec,
        leads: &[usize],
        state: &mut [u8],
        mentions: &dyn Fn(&Relation, usize) -> bool,
    ) -> bool {
        state[i] = 1;
        for (j, &lj) in leads.iter().enumerate() {
            if mentions(&spec.relations[i], lj) {
                if state[j] == 1 {
                    return false;
                }
                if state[j] == 0 && !visit(j, spec, leads, state, mentions) {
                    return false;
                }
            }
        }
        state[i] = 2;
        true
    }
    let mut state = vec![0u8; n];
    for i in 0..n {
        if state[i] == 0 && !visit(i, spec, &leads, &mut state, &mentions) {
            return Err(Error::Domain(
                "relation leading variables form a rewrite cycle".into(),
            ));
        }
    }
    Ok(())
}

/// iterated division by the relations; unique remainder (see module docs)
fn reduce_terms(
    spec: &GradedRingSpec,
    mut terms: BTreeMap<Monomial, Rat>,
    strategy: Strategy,
) -> BTreeMap<Monomial, Rat> {
    terms.retain(|_, c| !c.is_zero());
    if spec.relations.is_empty() {
        return terms;
    }
    loop {
        let pick = match strategy {
            Strategy::HighFirst => terms
                .iter()
                .rev()
                .find(|(m, _)| reducible_by(spec, m).is_some()),
            Strategy::LowFirst => terms
                .iter()
                .find(|(m, _)| reducible_by(spec, m).is_some()),
        };
        let (mono, coeff) = match pick {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return terms,
        };
        let rel_idx = reducible_by(spec, &mono).expect("picked reducible");
        let rel = &spec.relations[rel_idx];
        terms.remove(&mono);
        let mut quot = mono.clone();
        quot.0[rel.leading_var] -= rel.lead_exp;
        let scale = -coeff / &rel.lead_coeff;
        for (tm, tc) in &rel.tail {
            let m = quot.mul(tm);
            let add = &scale * tc;
            let cur = terms.remove(&m).unwrap_or_else(|| rat_int(0)) + add;
            if !cur.is_zero() {
                terms.insert(m, cur);
            }
        }
    }
}

fn reducible_by(spec: &GradedRingSpec, m: &Monomial) -> Option<usize> {
    spec.relations
        .iter()
        .position(|r| m.0[r.leading_var] >= r.lead_exp)
}

/// Sparse polynomial in normal form. Equality is normal-form equality.
#[derive(Debug, Clone)]
pub struct RingElem {
    ring: Ring,
    terms: BTreeMap<Monomial, Rat>,
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl RingElem {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(rat_int(0));
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    fn same_ring(&self, other: &RingElem) -> Ring {
        assert!(self.ring == other.ring, "elements of different rings");
        self.ring.clone()
    }

    pub fn add(&self, other: &RingElem) -> RingElem {
        let ring = self.same_ring(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let cur = terms.remove(m).unwrap_or_else(|| rat_int(0)) + c;
            if !cur.is_zero() {
                terms.insert(m.clone(), cur);
            }
        }
        // sums of normal forms stay normal: reduction is linear
        RingElem { ring, terms }
    }

    pub fn neg(&self) -> RingElem {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        RingElem { ring: self.ring.clone(), terms }
    }

    pub fn sub(&self, other: &RingElem) -> RingElem {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> RingElem {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        RingElem { ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, other: &RingElem) -> RingElem {
        let ring = self.same_ring(other);
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let add = ca * cb;
                let cur = terms.remove(&m).unwrap_or_else(|| rat_int(0)) + add;
                if !cur.is_zero() {
                    terms.insert(m, cur);
                }
            }
        }
        ring.from_terms(terms)
    }

    pub fn pow(&self, n: u32) -> RingElem {
        let mut out = self.ring.one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// split into weighted-homogeneous components, keyed by degree
    pub fn homogeneous_components(&self) -> BTreeMap<i64, RingElem> {
        let weights = self.ring.weights();
        let mut out: BTreeMap<i64, BTreeMap<Monomial, Rat>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree(&weights))
                .or_default()
                .insert(m.clone(), c.clone());
        }
        out.into_iter()
            .map(|(d, terms)| (d, RingElem { ring: self.ring.clone(), terms }))
            .collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_components().len() <= 1
    }

    /// degree of a nonzero homogeneous element
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let comps = self.homogeneous_components();
        if comps.len() == 1 {
            comps.into_keys().next()
        } else {
            None
        }
    }

    /// formal partial derivative; exponent 0 terms vanish, Laurent exponents
    /// follow the same power rule
    pub fn partial(&self, var: usize) -> RingElem {
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.0[var];
            if k == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] = k - 1;
            let add = c * rat_int(k);
            let cur = terms.remove(&m2).unwrap_or_else(|| rat_int(0)) + add;
            if !cur.is_zero() {
                terms.insert(m2, cur);
            }
        }
        self.ring.from_terms(terms)
    }

    /// substitute `value` for the given variable; negative powers need
    /// `value` to be invertible
    pub fn substitute(&self, var: usize, value: &RingElem) -> Result<RingElem> {
        assert!(self.ring == *value.ring(), "substitute value from another ring");
        let mut out = self.ring.zero();
        let mut inv: Option<RingElem> = None;
        for (m, c) in &self.terms {
            let k = m.0[var];
            let mut rest = m.clone();
            rest.0[var] = 0;
            let base = RingElem {
                ring: self.ring.clone(),
                terms: BTreeMap::from([(rest, c.clone())]),
            };
            let powed = if k >= 0 {
                value.pow(k as u32)
            } else {
                if inv.is_none() {
                    inv = Some(value.try_invert().ok_or_else(|| {
                        Error::Domain(
                            "substitution hits a negative power of a non-unit".into(),
                        )
                    })?);
                }
                inv.as_ref().unwrap().pow((-k) as u32)
            };
            out = out.add(&base.mul(&powed));
        }
        Ok(out)
    }

    /// Recognize units: a scalar times a monomial supported on inverted
    /// variables, possibly after multiplying by a monomial cofactor whose
    /// power collapses through a relation (bounded search).
    pub fn try_invert(&self) -> Option<RingElem> {
        if self.is_zero() {
            return None;
        }
        if let Some(inv) = self.directly_invertible() {
            return Some(inv);
        }
        let spec = self.ring.spec();
        if spec.relations.is_empty() {
            return None;
        }
        let max_lead = spec.relations.iter().map(|r| r.lead_exp).max().unwrap_or(1);
        let bound = (2 * max_lead).max(2) as usize;
        let free_vars: Vec<usize> = (0..self.ring.nvars())
            .filter(|&i| !spec.vars[i].inverted)
            .collect();
        for deg in 1..=bound {
            for combo in exponent_combinations(free_vars.len(), deg) {
                let mut exps = vec![0i64; self.ring.nvars()];
                for (slot, e) in combo.iter().enumerate() {
                    exps[free_vars[slot]] = *e as i64;
                }
                let cof = self
                    .ring
                    .monomial(&exps, rat_int(1))
                    .expect("nonnegative exponents");
                let prod = self.mul(&cof);
                if let Some(prod_inv) = prod.directly_invertible() {
                    return Some(cof.mul(&prod_inv));
                }
            }
        }
        None
    }

    fn directly_invertible(&self) -> Option<RingElem> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let spec = self.ring.spec();
        for (i, &e) in m.0.iter().enumerate() {
            if e != 0 && !spec.vars[i].inverted {
                return None;
            }
        }
        let inv_mono = Monomial(m.0.iter().map(|e| -e).collect());
        let inv_coeff = rat_int(1) / c;
        Some(RingElem {
            ring: self.ring.clone(),
            terms: BTreeMap::from([(inv_mono, inv_coeff)]),
        })
    }

    /// Exact division of normal forms in the underlying free Laurent ring.
    /// Sufficient (not complete) in quotient rings; complete when there are
    /// no relations.
    pub fn divide_exact(&self, divisor: &RingElem) -> Option<RingElem> {
        let ring = self.same_ring(divisor);
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(ring.zero());
        }
        // clear negative exponents with an inverted-monomial shift
        let n = ring.nvars();
        let shift_of = |terms: &BTreeMap<Monomial, Rat>| -> Monomial {
            let mut s = vec![0i64; n];
            for m in terms.keys() {
                for i in 0..n {
                    s[i] = s[i].min(m.0[i]);
                }
            }
            Monomial(s)
        };
        let sp = shift_of(&self.terms);
        let sq = shift_of(&divisor.terms);
        let unshift = |terms: &BTreeMap<Monomial, Rat>, s: &Monomial| {
            terms
                .iter()
                .map(|(m, c)| {
                    (
                        Monomial(m.0.iter().zip(&s.0).map(|(e, o)| e - o).collect()),
                        c.clone(),
                    )
                })
                .collect::<BTreeMap<_, _>>()
        };
        let mut p = unshift(&self.terms, &sp);
        let q = unshift(&divisor.terms, &sq);
        let (qm, qc) = q.iter().next_back().expect("nonzero divisor");
        let mut quot: BTreeMap<Monomial, Rat> = BTreeMap::new();
        while let Some((pm, pc)) = p.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let diff: Vec<i64> = pm.0.iter().zip(&qm.0).map(|(a, b)| a - b).collect();
            if diff.iter().any(|&e| e < 0) {
                return None;
            }
            let qt_m = Monomial(diff);
            let qt_c = &pc / qc;
            quot.insert(qt_m.clone(), qt_c.clone());
            for (m, c) in &q {
                let mm = qt_m.mul(m);
                let sub = &qt_c * c;
                let cur = p.remove(&mm).unwrap_or_else(|| rat_int(0)) - sub;
                if !cur.is_zero() {
                    p.insert(mm, cur);
                }
            }
        }
        // shift the quotient back: (sp - sq) is supported on inverted vars
        let back = Monomial(sp.0.iter().zip(&sq.0).map(|(a, b)| a - b).collect());
        let shifted = quot
            .into_iter()
            .map(|(m, c)| (m.mul(&back), c))
            .collect::<BTreeMap<_, _>>();
        for m in shifted.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e < 0 && !ring.spec().vars[i].inverted {
                    return None;
                }
            }
        }
        Some(ring.from_terms(shifted))
    }
}

/// all vectors of `slots` nonnegative integers summing to `total`
fn exponent_combinations(slots: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(slots: usize, total: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in (0..=total).rev() {
            cur.push(first);
            rec(slots - 1, total - first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if slots == 0 {
        return out;
    }
    rec(slots, total, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", self.ring.monomial_string(m))?;
            } else {
                write!(f, "{}*{}", mag, self.ring.monomial_string(m))?;
            }
        }
        Ok(())
    }
}

/// generating set of the degree-d Veronese subring, one monomial per
/// Hilbert-basis vector of the congruence monoid on the generator degrees
#[derive(Debug, Clone, PartialEq)]
pub struct VeroneseDescription {
    pub d: u32,
    pub generators: Vec<RingElem>,
    /// ring-variable exponent vector of each generator, canonical Laurent form
    pub exponents: Vec<Vec<i64>>,
}

/// Coordinate directions for monoid computations: one per variable, plus an
/// inverse direction for each inverted variable. A Laurent monomial embeds
/// canonically (each variable uses only one of its two directions), and
/// every Hilbert-basis vector other than the v * v^-1 pairs is canonical.
#[derive(Debug, Clone)]
pub struct MonoidDirections {
    pub dirs: Vec<(usize, i8)>,
}

impl MonoidDirections {
    pub fn new(ring: &Ring) -> Self {
        let mut dirs: Vec<(usize, i8)> = (0..ring.nvars()).map(|i| (i, 1)).collect();
        for (i, v) in ring.spec().vars.iter().enumerate() {
            if v.inverted {
                dirs.push((i, -1));
            }
        }
        MonoidDirections { dirs }
    }

    pub fn weights(&self, ring: &Ring) -> Vec<i64> {
        let w = ring.weights();
        self.dirs
            .iter()
            .map(|&(i, s)| if s > 0 { w[i] } else { -w[i] })
            .collect()
    }

    pub fn to_exponents(&self, ring: &Ring, v: &[u32]) -> Vec<i64> {
        let mut exps = vec![0i64; ring.nvars()];
        for (&(i, s), &k) in self.dirs.iter().zip(v) {
            exps[i] += s as i64 * k as i64;
        }
        exps
    }

    pub fn from_exponents(&self, exps: &[i64]) -> Vec<u32> {
        self.dirs
            .iter()
            .map(|&(i, s)| {
                let e = exps[i];
                if (e >= 0) == (s > 0) {
                    e.unsigned_abs() as u32
                } else {
                    0
                }
            })
            .collect()
    }
}

/// Generators of B^(d) = direct sum of the graded pieces in degrees d*Z.
pub fn veronese_generators(ring: &Ring, d: u32) -> Result<VeroneseDescription> {
    let dirs = MonoidDirections::new(ring);
    let monoid = CongruenceMonoid::new(dirs.weights(ring), d)?;
    let basis = hilbert_basis(&monoid)?;
    let mut generators = Vec::new();
    let mut exponents = Vec::new();
    for v in basis {
        let exps = dirs.to_exponents(ring, &v);
        if exps.iter().all(|&e| e == 0) {
            continue; // v * v^-1 pair, the identity
        }
        generators.push(ring.monomial(&exps, rat_int(1))?);
        exponents.push(exps);
    }
    Ok(VeroneseDescription { d, generators, exponents })
}

/// Element of the localization B_f presented as numer / f^pow.
#[derive(Debug, Clone)]
pub struct LocalizedElem {
    pub f: RingElem,
    pub numer: RingElem,
    pub pow: u32,
}

impl LocalizedElem {
    pub fn new(f: RingElem, numer: RingElem, pow: u32) -> Self {
        let mut out = LocalizedElem { f, numer, pow };
        out.reduce();
        out
    }

    fn reduce(&mut self) {
        while self.pow > 0 {
            match self.numer.divide_exact(&self.f) {
                Some(q) => {
                    self.numer = q;
                    self.pow -= 1;
                }
                None => break,
            }
        }
        if self.numer.is_zero() {
            self.pow = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.pow == 0 && self.numer.is_one()
    }

    /// degree when numerator and denominator are homogeneous
    pub fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            return Some(0);
        }
        let dn = self.numer.homogeneous_degree()?;
        let df = self.f.homogeneous_degree()?;
        Some(dn - self.pow as i64 * df)
    }

    pub fn mul(&self, other: &LocalizedElem) -> LocalizedElem {
        assert!(self.f == other.f, "localized elements over different denominators");
        LocalizedElem::new(
            self.f.clone(),
            self.numer.mul(&other.numer),
            self.pow + other.pow,
        )
    }

    pub fn add(&self, other: &LocalizedElem) -> LocalizedElem {
        assert!(self.f == other.f, "localized elements over different denominators");
        let p = self.pow.max(other.pow);
        let a = self.numer.mul(&self.f.pow(p - self.pow));
        let b = other.numer.mul(&other.f.pow(p - other.pow));
        LocalizedElem::new(self.f.clone(), a.add(&b), p)
    }

    pub fn sub(&self, other: &LocalizedElem) -> LocalizedElem {
        self.add(&other.scale(&rat_int(-1)))
    }

    pub fn scale(&self, c: &Rat) -> LocalizedElem {
        LocalizedElem::new(self.f.clone(), self.numer.scale(c), self.pow)
    }

    /// multiply by f^k; negative k raises the denominator power
    pub fn times_f_power(&self, k: i64) -> LocalizedElem {
        if k >= 0 {
            LocalizedElem::new(self.f.clone(), self.numer.mul(&self.f.pow(k as u32)), self.pow)
        } else {
            LocalizedElem::new(self.f.clone(), self.numer.clone(), self.pow + (-k) as u32)
        }
    }

    /// the underlying ring element when the denominator clears completely
    pub fn as_ring_elem(&self) -> Option<RingElem> {
        if self.pow == 0 {
            Some(self.numer.clone())
        } else {
            None
        }
    }
}

impl PartialEq for LocalizedElem {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f
            && self.numer.mul(&other.f.pow(other.pow)) == other.numer.mul(&self.f.pow(self.pow))
    }
}

impl fmt::Display for LocalizedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pow == 0 {
            return write!(f, "{}", self.numer);
        }
        let numer = if self.numer.term_count() > 1 {
            format!("({})", self.numer)
        } else {
            format!("{}", self.numer)
        };
        // parenthesize the denominator unless it prints as a bare variable
        let plain = format!("{}", self.f);
        let denom = if self
            .f
            .ring()
            .var_names()
            .iter()
            .any(|name| *name == plain)
        {
            plain
        } else {
            format!("({plain})")
        };
        if self.pow == 1 {
            write!(f, "{numer} / {denom}")
        } else {
            write!(f, "{numer} / {denom}^{}", self.pow)
        }
    }
}

/// Generators of the degree-0 part of the localization B_f for a monomial f
/// of nonzero degree: minimal solutions of deg(numerator) = pow * deg(f),
/// mapped to numerator / f^pow; the trivial generator 1 is dropped.
pub fn degree_zero_localization_generators(
    ring: &Ring,
    f: &RingElem,
) -> Result<Vec<LocalizedElem>> {
    if f.term_count() != 1 {
        return Err(Error::Domain(
            "localization generators need a monomial denominator".into(),
        ));
    }
    let deg_f = f.homogeneous_degree().expect("monomials are homogeneous");
    if deg_f == 0 {
        return Err(Error::DegreeZeroDenominator);
    }
    let (f_mono, f_coeff) = f.terms().next().map(|(m, c)| (m.clone(), c.clone())).unwrap();
    let _ = f_mono;
    let dirs = MonoidDirections::new(ring);
    let mut weights = dirs.weights(ring);
    weights.push(-deg_f);
    let sols = minimal_kernel_solutions(&weights)?;
    let mut out = Vec::new();
    for sol in sols {
        let (front, pow) = sol.split_at(sol.len() - 1);
        let pow = pow[0];
        let exps = dirs.to_exponents(ring, front);
        // numer / (f_mono)^pow = numer * f_coeff^pow / f^pow
        let mut coeff = rat_int(1);
        for _ in 0..pow {
            coeff = coeff * &f_coeff;
        }
        let numer = ring.monomial(&exps, coeff)?;
        let gen = LocalizedElem::new(f.clone(), numer, pow);
        if gen.is_one() {
            continue;
        }
        out.push(gen);
    }
    Ok(out)
}
