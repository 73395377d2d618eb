//! Saturation invariants of graded domains.
//!
//! For B generated over B_0 by homogeneous elements of nonzero degrees
//! d_1, ..., d_n, the prime set Pi(B) collects the primes dividing some
//! e(B/p) with p a height-one homogeneous prime. It always contains E (the
//! primes of the product of the e_i over non-unit generators) and, under a
//! height condition that holds for the presentations treated here, it is
//! contained in the primes of d_1 * ... * d_n. The pair-substitution test
//! upgrades the bounds to an exact answer.
//!
//! Every report carries a hypotheses log: entries are Verified when this
//! crate checked them, Asserted when the presentation carries a flag, and
//! Unknown when neither holds. A report is only as strong as its log.

use std::fmt;

use num_traits::Zero;

use crate::arith::{gcd_i64, int, lcm_of_set, prime_factors, Int, PrimeSet};
use crate::error::{Error, Result};
use crate::ring::{AssertedFlag, Ring, RingElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisStatus {
    Verified,
    Asserted,
    Failed,
    Unknown,
    NotApplicable,
}

impl fmt::Display for HypothesisStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HypothesisStatus::Verified => "verified",
            HypothesisStatus::Asserted => "asserted",
            HypothesisStatus::Failed => "failed",
            HypothesisStatus::Unknown => "unknown",
            HypothesisStatus::NotApplicable => "not applicable",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub name: String,
    pub status: HypothesisStatus,
    pub detail: String,
}

impl Hypothesis {
    fn new(name: &str, status: HypothesisStatus, detail: impl Into<String>) -> Self {
        Hypothesis { name: name.into(), status, detail: detail.into() }
    }
}

/// What is known about Pi(B). Exact claims the set; an interval only claims
/// lower ⊆ Pi ⊆ upper (upper None means no upper bound was established).
#[derive(Debug, Clone, PartialEq)]
pub enum PiSet {
    Exact(PrimeSet),
    AllPrimes,
    Interval { lower: PrimeSet, upper: Option<PrimeSet> },
}

impl PiSet {
    pub fn is_exact(&self) -> bool {
        matches!(self, PiSet::Exact(_))
    }

    pub fn render(&self) -> String {
        match self {
            PiSet::Exact(s) => format!("{s}"),
            PiSet::AllPrimes => "all primes".into(),
            PiSet::Interval { lower, upper: Some(u) } => {
                format!("between {lower} and {u}")
            }
            PiSet::Interval { lower, upper: None } => {
                format!("between {lower} and all primes")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaturationReport {
    pub d_list: Vec<i64>,
    /// saturation index: gcd of the degrees that occur
    pub e_b: i64,
    pub e_list: Vec<i64>,
    /// E: primes of the product of e_i over non-unit generators
    pub e_set: PrimeSet,
    pub pi: PiSet,
    pub saturated_codim1: bool,
    /// true only when established; false can also mean undetermined, in
    /// which case the log carries an Unknown entry saying so
    pub pointwise_saturated: bool,
    /// 1-indexed pairs (i, j), i <= j, failing the substitution test
    pub failing_pairs: Vec<(usize, usize)>,
    pub hypotheses_log: Vec<Hypothesis>,
}

impl SaturationReport {
    /// Pi*(B): the positive integers no element of Pi divides.
    pub fn pi_star_description(&self) -> String {
        match &self.pi {
            PiSet::Exact(s) if s.is_empty() => "all positive integers".into(),
            PiSet::Exact(s) => {
                format!("positive integers with no prime factor in {s}")
            }
            PiSet::AllPrimes => "{1}".into(),
            PiSet::Interval { .. } => "undetermined (Pi known only within bounds)".into(),
        }
    }

    pub fn all_hypotheses_hold(&self) -> bool {
        self.hypotheses_log.iter().all(|h| {
            matches!(
                h.status,
                HypothesisStatus::Verified
                    | HypothesisStatus::Asserted
                    | HypothesisStatus::NotApplicable
            )
        })
    }

    pub fn fully_verified(&self) -> bool {
        self.hypotheses_log.iter().all(|h| {
            matches!(
                h.status,
                HypothesisStatus::Verified | HypothesisStatus::NotApplicable
            )
        })
    }
}

/// e_i = gcd of all degrees except the i-th.
pub fn e_invariants(d_list: &[i64]) -> Result<Vec<i64>> {
    if d_list.len() < 2 {
        return Err(Error::TooFewGenerators);
    }
    (0..d_list.len())
        .map(|i| {
            let others: Vec<i64> = d_list
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &d)| d)
                .collect();
            gcd_i64(&others)
        })
        .collect()
}

/// gcd of the generator degrees; this is e(B) for B generated in them
pub fn saturation_index(d_list: &[i64]) -> Result<i64> {
    gcd_i64(d_list)
}

fn e_set_of(e_list: &[i64], is_unit: &[bool]) -> Result<PrimeSet> {
    let mut prod = int(1);
    for (e, &u) in e_list.iter().zip(is_unit) {
        if !u {
            prod *= int(*e);
        }
    }
    prime_factors(&prod)
}

/// true iff no element of Pi divides d
pub fn pi_star_contains(report: &SaturationReport, d: i64) -> Result<bool> {
    if d <= 0 {
        return Err(Error::Domain("Pi* only contains positive integers".into()));
    }
    match &report.pi {
        PiSet::Exact(s) => {
            let d = int(d);
            Ok(s.iter().all(|p| !(&d % p).is_zero()))
        }
        PiSet::AllPrimes => Ok(d == 1),
        PiSet::Interval { .. } => Err(Error::PiNotExact),
    }
}

fn check_saturation_index(d_list: &[i64]) -> Result<i64> {
    let e_b = saturation_index(d_list)?;
    if e_b != 1 {
        return Err(Error::NotSaturationIndexOne { e: e_b.unsigned_abs() });
    }
    Ok(e_b)
}

/// relation as an element of the free ring on the same variables
fn relation_in_free_ring(ring: &Ring) -> Result<(Ring, RingElem)> {
    let mut b = Ring::builder();
    for v in &ring.spec().vars {
        b = b.var(&v.name, v.weight);
    }
    let free = b.build()?;
    let rel = &ring.relations()[0];
    let terms = rel.full_terms(ring.nvars()).into_iter().collect();
    Ok((free.clone(), free.from_terms(terms)))
}

/// Exactness test for a hypersurface B = Q[X_1..X_n]/(F): Pi(B) = E when F
/// avoids every ideal (X_i, X_j). Failing pairs downgrade the claim to the
/// interval E ⊆ Pi ⊆ primes(d_1 ... d_n).
pub fn pi_set_hypersurface(ring: &Ring) -> Result<SaturationReport> {
    if ring.relations().len() != 1 || ring.inverted().iter().any(|&b| b) {
        return Err(Error::Domain(
            "hypersurface analysis needs exactly one relation and no inverted variables"
                .into(),
        ));
    }
    let d_list = ring.weights();
    let n = d_list.len();
    let e_b = check_saturation_index(&d_list)?;
    let e_list = e_invariants(&d_list)?;
    let e_set = e_set_of(&e_list, &vec![false; n])?;

    let (free, f) = relation_in_free_ring(ring)?;
    let zero = free.zero();
    let mut failing_pairs = Vec::new();
    for i in 0..n {
        for j in i..n {
            let sub = f.substitute(i, &zero)?.substitute(j, &zero)?;
            if sub.is_zero() {
                failing_pairs.push((i + 1, j + 1));
            }
        }
    }

    // pointwise saturation: every graded prime outside the irrelevant ideal
    // keeps two generators of coprime degrees, provided the relation has a
    // pure power in each variable
    let mut pure_powers = true;
    for i in 0..n {
        let mut g = f.clone();
        for j in 0..n {
            if j != i {
                g = g.substitute(j, &zero)?;
            }
        }
        if g.is_zero() {
            pure_powers = false;
        }
    }
    let pairwise_coprime = (0..n)
        .all(|i| (i + 1..n).all(|j| gcd_i64(&[d_list[i], d_list[j]]).unwrap_or(0) == 1));
    let pointwise = pure_powers && pairwise_coprime && failing_pairs.is_empty();

    let mut log = vec![
        Hypothesis::new(
            "gcd of generator degrees is 1",
            HypothesisStatus::Verified,
            format!("gcd{d_list:?} = {e_b}"),
        ),
        Hypothesis::new(
            "relation is homogeneous",
            HypothesisStatus::Verified,
            "checked when the presentation was built",
        ),
        Hypothesis::new(
            "relation is a prime element",
            if ring.asserted(AssertedFlag::RelationIrreducible) {
                HypothesisStatus::Asserted
            } else {
                HypothesisStatus::Unknown
            },
            "irreducibility over Q is not tested here",
        ),
    ];

    let (pi, saturated) = if failing_pairs.is_empty() {
        log.push(Hypothesis::new(
            "relation avoids every ideal (X_i, X_j)",
            HypothesisStatus::Verified,
            format!("all {} substitution checks were nonzero", n * (n + 1) / 2),
        ));
        let saturated = e_set.is_empty();
        (PiSet::Exact(e_set.clone()), saturated)
    } else {
        let pair_names: Vec<String> = failing_pairs
            .iter()
            .map(|(i, j)| format!("({i}, {j})"))
            .collect();
        log.push(Hypothesis::new(
            "relation avoids every ideal (X_i, X_j)",
            HypothesisStatus::Failed,
            format!("zero after substituting pairs {}", pair_names.join(", ")),
        ));
        let upper = if n >= 3 {
            log.push(Hypothesis::new(
                "no height-one prime contains every generator",
                HypothesisStatus::Verified,
                "the ideal of all generators has height at least n - 1 >= 2",
            ));
            let prod: Int = d_list.iter().map(|&d| int(d)).product();
            Some(prime_factors(&prod)?)
        } else {
            log.push(Hypothesis::new(
                "no height-one prime contains every generator",
                HypothesisStatus::Unknown,
                "not established for n = 2; no upper bound claimed",
            ));
            None
        };
        // the bounds can still settle saturation even when exactness fails
        let saturated = match &upper {
            Some(u) if u.is_empty() => true,
            _ => false,
        };
        if !saturated && e_set.is_empty() {
            log.push(Hypothesis::new(
                "saturation in codimension 1",
                HypothesisStatus::Unknown,
                "bounds do not settle it; reported false",
            ));
        }
        (PiSet::Interval { lower: e_set.clone(), upper }, saturated)
    };

    log.push(Hypothesis::new(
        "pointwise saturation criterion",
        if pointwise {
            HypothesisStatus::Verified
        } else {
            HypothesisStatus::Unknown
        },
        if pointwise {
            "pairwise coprime degrees and pure powers in every variable".into()
        } else {
            "criterion not met; pointwise saturation reported false, \
             meaning not established"
                .to_string()
        },
    ));

    Ok(SaturationReport {
        d_list,
        e_b,
        e_list,
        e_set,
        pi,
        saturated_codim1: saturated,
        pointwise_saturated: pointwise,
        failing_pairs,
        hypotheses_log: log,
    })
}

/// Free polynomial and Laurent polynomial rings: a height-one prime avoids
/// every unit and all but at most one of the remaining variables, so Pi = E
/// exactly, with no assertions needed.
fn analyze_free(ring: &Ring) -> Result<SaturationReport> {
    let d_list = ring.weights();
    let e_b = check_saturation_index(&d_list)?;
    let e_list = e_invariants(&d_list)?;
    let inverted = ring.inverted();
    let e_set = e_set_of(&e_list, &inverted)?;

    // pointwise saturation, decided exactly: the monomial primes realize
    // every possible survivor set, and no prime can contain a unit
    let free_idx: Vec<usize> = (0..d_list.len()).filter(|&i| !inverted[i]).collect();
    assert!(free_idx.len() <= 16, "subset scan over too many variables");
    let mut pointwise = true;
    for mask in 0u32..(1 << free_idx.len()) {
        let killed: Vec<usize> = free_idx
            .iter()
            .enumerate()
            .filter(|(pos, _)| mask & (1 << pos) != 0)
            .map(|(_, &i)| i)
            .collect();
        let survivors: Vec<usize> =
            (0..d_list.len()).filter(|i| !killed.contains(i)).collect();
        if survivors.is_empty() {
            continue; // the quotient is Q; not a point of Proj
        }
        // the monomial prime avoids the irrelevant ideal iff the survivors
        // reach a positive degree
        let reaches_positive = survivors
            .iter()
            .any(|&i| d_list[i] > 0 || inverted[i]);
        if !reaches_positive {
            continue;
        }
        let degs: Vec<i64> = survivors.iter().map(|&i| d_list[i]).collect();
        if gcd_i64(&degs)? != 1 {
            pointwise = false;
        }
    }

    let log = vec![
        Hypothesis::new(
            "gcd of generator degrees is 1",
            HypothesisStatus::Verified,
            format!("gcd{d_list:?} = {e_b}"),
        ),
        Hypothesis::new(
            "free presentation",
            HypothesisStatus::Verified,
            "no relations: the ring is factorial, a height-one prime is \
             principal and avoids all but at most one variable",
        ),
    ];
    let saturated = e_set.is_empty();
    Ok(SaturationReport {
        d_list,
        e_b,
        e_list,
        e_set: e_set.clone(),
        pi: PiSet::Exact(e_set),
        saturated_codim1: saturated,
        pointwise_saturated: pointwise,
        failing_pairs: Vec::new(),
        hypotheses_log: log,
    })
}

/// Everything else gets the two-sided bounds; exactness only when the
/// bounds meet and the presentation asserts a domain.
fn analyze_bounds(ring: &Ring) -> Result<SaturationReport> {
    let d_list = ring.weights();
    let e_b = check_saturation_index(&d_list)?;
    let e_list = e_invariants(&d_list)?;
    let mut is_unit = Vec::with_capacity(d_list.len());
    for name in ring.var_names() {
        let v = ring.var(name)?;
        is_unit.push(v.try_invert().is_some());
    }
    let e_set = e_set_of(&e_list, &is_unit)?;

    let domainish = ring.asserted(AssertedFlag::Domain)
        || ring.asserted(AssertedFlag::RelationIrreducible);
    let mut log = vec![
        Hypothesis::new(
            "gcd of generator degrees is 1",
            HypothesisStatus::Verified,
            format!("gcd{d_list:?} = {e_b}"),
        ),
        Hypothesis::new(
            "the ring is a domain",
            if domainish {
                HypothesisStatus::Asserted
            } else {
                HypothesisStatus::Unknown
            },
            "quotient presentations cannot be checked for zero divisors here",
        ),
        Hypothesis::new(
            "generators outside the unit set are non-units",
            HypothesisStatus::Unknown,
            "unit recognition is pattern-based and one-directional",
        ),
    ];

    let units: Vec<i64> = d_list
        .iter()
        .zip(&is_unit)
        .filter(|(_, &u)| u)
        .map(|(&d, _)| d)
        .collect();
    let upper = if units.is_empty() {
        log.push(Hypothesis::new(
            "no height-one prime contains every generator",
            HypothesisStatus::Unknown,
            "not established for this presentation; no upper bound claimed",
        ));
        None
    } else {
        log.push(Hypothesis::new(
            "a unit generator bounds Pi",
            HypothesisStatus::Verified,
            format!("unit degrees {units:?}"),
        ));
        Some(prime_factors(&int(gcd_i64(&units)?))?)
    };

    let exact = match &upper {
        Some(u) => *u == e_set && domainish,
        None => false,
    };
    let (pi, saturated) = if exact {
        let saturated = e_set.is_empty();
        (PiSet::Exact(e_set.clone()), saturated)
    } else {
        let saturated = matches!(&upper, Some(u) if u.is_empty());
        if !saturated && e_set.is_empty() {
            log.push(Hypothesis::new(
                "saturation in codimension 1",
                HypothesisStatus::Unknown,
                "bounds do not settle it; reported false",
            ));
        }
        (PiSet::Interval { lower: e_set.clone(), upper }, saturated)
    };
    log.push(Hypothesis::new(
        "pointwise saturation criterion",
        HypothesisStatus::Unknown,
        "no criterion implemented for this presentation; reported false",
    ));

    Ok(SaturationReport {
        d_list,
        e_b,
        e_list,
        e_set,
        pi,
        saturated_codim1: saturated,
        pointwise_saturated: false,
        failing_pairs: Vec::new(),
        hypotheses_log: log,
    })
}

/// Dispatch on the shape of the presentation.
pub fn analyze_ring(ring: &Ring) -> Result<SaturationReport> {
    if ring.relations().is_empty() {
        analyze_free(ring)
    } else if ring.relations().len() == 1 && !ring.inverted().iter().any(|&b| b) {
        pi_set_hypersurface(ring)
    } else {
        analyze_bounds(ring)
    }
}

/// Pham-Brieskorn ring: Q[X_1..X_n]/(X_1^a_1 + ... + X_n^a_n) graded by
/// d_i = lcm(a) / a_i.
#[derive(Debug, Clone, PartialEq)]
pub struct PBRing {
    exponents: Vec<u64>,
}

impl PBRing {
    pub fn new(exponents: Vec<u64>) -> Result<Self> {
        if exponents.len() < 3 {
            return Err(Error::TooFewExponents { got: exponents.len() });
        }
        if exponents.iter().any(|&a| a == 0) {
            return Err(Error::Domain("exponents must be positive".into()));
        }
        Ok(PBRing { exponents })
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn lcm(&self) -> Result<i64> {
        let l = lcm_of_set(&self.exponents.iter().map(|&a| int(a as i64)).collect::<Vec<_>>())?;
        i64::try_from(&l).map_err(|_| Error::Domain("lcm does not fit in i64".into()))
    }

    pub fn degrees(&self) -> Result<Vec<i64>> {
        let l = self.lcm()?;
        Ok(self.exponents.iter().map(|&a| l / a as i64).collect())
    }

    /// the presented ring, generators X1..Xn
    pub fn ring(&self) -> Result<Ring> {
        let degrees = self.degrees()?;
        let mut b = Ring::builder();
        for (i, &d) in degrees.iter().enumerate() {
            b = b.var(&format!("X{}", i + 1), d);
        }
        let relation = self
            .exponents
            .iter()
            .enumerate()
            .map(|(i, &a)| format!("X{}^{}", i + 1, a))
            .collect::<Vec<_>>()
            .join(" + ");
        b.relation(&relation, "X1")
            .assert_flag(AssertedFlag::RelationIrreducible)
            .assert_flag(AssertedFlag::Domain)
            .assert_flag(AssertedFlag::Normal)
            .build()
    }
}

/// Classifier via the lcm criteria, cross-checked against the e_i.
pub fn pb_analyze(pb: &PBRing) -> Result<SaturationReport> {
    let a = pb.exponents();
    let n = a.len();
    let big = |x: u64| int(x as i64);
    let l_all = lcm_of_set(&a.iter().map(|&x| big(x)).collect::<Vec<_>>())?;
    let d_list = pb.degrees()?;
    let e_b = saturation_index(&d_list)?;
    assert_eq!(e_b, 1, "gcd of lcm(a)/a_i is forced to 1");
    let e_list = e_invariants(&d_list)?;
    let e_set = e_set_of(&e_list, &vec![false; n])?;

    // two independent derivations of each flag
    let saturated_lcm = (0..n).all(|i| {
        let others: Vec<Int> = a
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, &x)| big(x))
            .collect();
        lcm_of_set(&others).map(|l| l == l_all).unwrap_or(false)
    });
    let saturated_e = e_list.iter().all(|&e| e == 1);
    assert_eq!(
        saturated_lcm, saturated_e,
        "lcm-drop and e_i criteria must agree"
    );
    let pointwise_lcm = (0..n).all(|i| {
        (i + 1..n).all(|j| {
            lcm_of_set(&[big(a[i]), big(a[j])])
                .map(|l| l == l_all)
                .unwrap_or(false)
        })
    });
    let pointwise_gcd = (0..n)
        .all(|i| (i + 1..n).all(|j| gcd_i64(&[d_list[i], d_list[j]]).unwrap_or(0) == 1));
    assert_eq!(
        pointwise_lcm, pointwise_gcd,
        "pairwise lcm and pairwise coprimality must agree"
    );
    assert!(
        !pointwise_lcm || saturated_lcm,
        "pointwise saturation implies saturation in codimension 1"
    );

    let mut log = vec![
        Hypothesis::new(
            "relation is a prime element",
            HypothesisStatus::Verified,
            "a sum of pure powers in distinct variables, n >= 3",
        ),
        Hypothesis::new(
            "the ring is normal",
            HypothesisStatus::Verified,
            "hypersurface with at most one singular point",
        ),
        Hypothesis::new(
            "gcd of generator degrees is 1",
            HypothesisStatus::Verified,
            format!("forced by d_i = lcm(a)/a_i; gcd{d_list:?} = 1"),
        ),
    ];
    if n >= 4 && saturated_lcm {
        log.push(Hypothesis::new(
            "rigidity transfer",
            HypothesisStatus::Verified,
            "n >= 4 and saturated: the ring is non-rigid exactly when some \
             (equivalently every) Veronese subring is non-rigid",
        ));
    }

    Ok(SaturationReport {
        d_list,
        e_b,
        e_list,
        e_set: e_set.clone(),
        pi: PiSet::Exact(e_set),
        saturated_codim1: saturated_lcm,
        pointwise_saturated: pointwise_lcm,
        failing_pairs: Vec::new(),
        hypotheses_log: log,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub hypotheses: Vec<Hypothesis>,
    /// the non-rigidity equivalence between the ring and its Veronese
    /// subrings applies only when everything above is verified or asserted
    pub equivalence_applies: bool,
}

/// Checks the hypotheses for transporting non-rigidity between B and its
/// Veronese subrings: e_i = 1 for all i is arithmetic, the rest are flags.
pub fn check_rigidity_transport_hypotheses(ring: &Ring) -> HypothesisReport {
    let d_list = ring.weights();
    let free = ring.relations().is_empty();
    let mut hypotheses = Vec::new();

    match e_invariants(&d_list) {
        Ok(e_list) => {
            let ok = e_list.iter().all(|&e| e == 1);
            hypotheses.push(Hypothesis::new(
                "gcd of degrees omitting any one generator is 1",
                if ok { HypothesisStatus::Verified } else { HypothesisStatus::Failed },
                format!("e = {e_list:?}"),
            ));
        }
        Err(_) => hypotheses.push(Hypothesis::new(
            "gcd of degrees omitting any one generator is 1",
            HypothesisStatus::Failed,
            "needs at least two generators",
        )),
    }

    let flag = |on: bool, verified_free: bool| {
        if on {
            HypothesisStatus::Asserted
        } else if free && verified_free {
            HypothesisStatus::Verified
        } else {
            HypothesisStatus::Unknown
        }
    };
    hypotheses.push(Hypothesis::new(
        "the ring is a normal domain",
        flag(
            ring.asserted(AssertedFlag::Domain) && ring.asserted(AssertedFlag::Normal),
            true,
        ),
        "free presentations are normal domains; quotients rely on flags",
    ));
    hypotheses.push(Hypothesis::new(
        "generators are prime elements",
        flag(ring.asserted(AssertedFlag::GeneratorsPrime), true),
        "variables of a free presentation are prime; quotients rely on flags",
    ));
    hypotheses.push(Hypothesis::new(
        "generators are pairwise non-associate",
        flag(ring.asserted(AssertedFlag::GeneratorsNonAssociate), true),
        "distinct variables of a free presentation are non-associate; \
         quotients rely on flags",
    ));

    let equivalence_applies = hypotheses.iter().all(|h| {
        matches!(
            h.status,
            HypothesisStatus::Verified | HypothesisStatus::Asserted
        )
    });
    HypothesisReport { hypotheses, equivalence_applies }
}
