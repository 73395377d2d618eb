//! Exact integer arithmetic for the graded-ring computations: gcd/lcm of
//! sets with Bezout witnesses, deterministic primality and factorization,
//! Hilbert bases of congruence and kernel monoids in small boxes, and the
//! coprime-element search in numerical monoids.
//!
//! Everything here is pure and exact. Box enumerations are sized for desk
//! scale inputs (coordinate bounds in the single digits); the complexity is
//! (bound+1)^r and no attempt is made to go past that honestly.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(int(p), int(q))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(int(n))
}

/// gcd of a nonempty set, sign- and order-invariant; gcd {0} = 0.
pub fn gcd_of_set(xs: &[Int]) -> Result<Int> {
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut g = Int::zero();
    for x in xs {
        g = g.gcd(x);
    }
    Ok(g)
}

/// Same gcd together with Bezout coefficients: sum(c_i * x_i) = g.
pub fn gcd_of_set_with_witness(xs: &[Int]) -> Result<(Int, Vec<Int>)> {
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    // fold extended euclid: keep g = sum(c_i x_i) and extend one x at a time
    let mut g = xs[0].clone();
    let mut coeffs = vec![Int::one()];
    for x in &xs[1..] {
        let (g2, s, t) = egcd(&g, x);
        for c in coeffs.iter_mut() {
            *c *= &s;
        }
        coeffs.push(t);
        g = g2;
    }
    // normalize sign so the witnessed gcd is nonnegative
    if g.is_negative() {
        g = -g;
        for c in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    Ok((g, coeffs))
}

/// extended euclid: returns (g, s, t) with s*a + t*b = g, g = gcd(a, b) up to sign.
fn egcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    if b.is_zero() {
        return (a.clone(), Int::one(), Int::zero());
    }
    let (q, r) = a.div_rem(b);
    let (g, s, t) = egcd(b, &r);
    let new_t = s - &q * &t;
    (g, t, new_t)
}

pub fn lcm_of_set(xs: &[Int]) -> Result<Int> {
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut l = Int::one();
    for x in xs {
        if x.is_zero() {
            return Ok(Int::zero());
        }
        l = l.lcm(x);
    }
    Ok(l.abs())
}

pub fn gcd_i64(xs: &[i64]) -> Result<i64> {
    let ints: Vec<Int> = xs.iter().map(|&x| int(x)).collect();
    let g = gcd_of_set(&ints)?;
    Ok(g.to_i64().expect("gcd fits i64 when inputs do"))
}

// deterministic Miller-Rabin witness set, valid below 3.3 * 10^24
const MR_WITNESSES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality check (Miller-Rabin with a fixed witness set that
/// is exact for every input this crate produces).
pub fn is_prime(n: &Int) -> bool {
    if *n < int(2) {
        return false;
    }
    let n = n.magnitude().clone();
    let small: [u32; 12] = MR_WITNESSES;
    for p in small {
        let pb = num_bigint::BigUint::from(p);
        if n == pb {
            return true;
        }
        if (&n % &pb).is_zero() {
            return false;
        }
    }
    // n - 1 = 2^s * d with d odd
    let one = num_bigint::BigUint::from(1u32);
    let two = num_bigint::BigUint::from(2u32);
    let nm1 = &n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        s += 1;
    }
    'witness: for a in MR_WITNESSES {
        let mut x = num_bigint::BigUint::from(a).modpow(&d, &n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, &n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sorted set of distinct primes with a conventional display.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrimeSet {
    primes: BTreeSet<Int>,
}

impl PrimeSet {
    pub fn empty() -> Self {
        PrimeSet::default()
    }

    pub fn from_primes(primes: impl IntoIterator<Item = Int>) -> Self {
        let primes: BTreeSet<Int> = primes.into_iter().collect();
        debug_assert!(primes.iter().all(is_prime));
        PrimeSet { primes }
    }

    pub fn contains(&self, p: &Int) -> bool {
        self.primes.contains(p)
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn union(&self, other: &PrimeSet) -> PrimeSet {
        PrimeSet {
            primes: self.primes.union(&other.primes).cloned().collect(),
        }
    }

    pub fn is_subset(&self, other: &PrimeSet) -> bool {
        self.primes.is_subset(&other.primes)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Int> {
        self.primes.iter()
    }

    /// true iff no member divides n
    pub fn coprime_to(&self, n: &Int) -> bool {
        self.primes.iter().all(|p| !(n % p).is_zero())
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.primes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// Set of prime factors of n != 0 (sign ignored); prime_factors(1) is empty.
pub fn prime_factors(n: &Int) -> Result<PrimeSet> {
    if n.is_zero() {
        return Err(Error::ZeroHasAllPrimes);
    }
    let mut m = n.abs();
    let mut out: BTreeSet<Int> = BTreeSet::new();
    let two = int(2);
    while (&m % &two).is_zero() {
        out.insert(two.clone());
        m /= &two;
    }
    let mut d = int(3);
    while &d * &d <= m {
        if is_prime(&m) {
            break;
        }
        if (&m % &d).is_zero() {
            out.insert(d.clone());
            while (&m % &d).is_zero() {
                m /= &d;
            }
        }
        d += 2;
    }
    if m > Int::one() {
        debug_assert!(is_prime(&m));
        out.insert(m);
    }
    Ok(PrimeSet { primes: out })
}

/// Union of the prime factor sets of the entries; errors only on a zero entry.
pub fn prime_factors_of_all(xs: &[Int]) -> Result<PrimeSet> {
    let mut out = PrimeSet::empty();
    for x in xs {
        out = out.union(&prime_factors(x)?);
    }
    Ok(out)
}

/// N = { k in N^r : sum_i k_i * weights_i = 0 (mod modulus) }.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceMonoid {
    pub weights: Vec<i64>,
    pub modulus: u32,
}

impl CongruenceMonoid {
    pub fn new(weights: Vec<i64>, modulus: u32) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInput);
        }
        if modulus == 0 {
            return Err(Error::InvalidModulus);
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::Domain("congruence monoid weights must be nonzero".into()));
        }
        Ok(CongruenceMonoid { weights, modulus })
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        debug_assert_eq!(v.len(), self.weights.len());
        let s: i128 = v
            .iter()
            .zip(&self.weights)
            .map(|(&k, &w)| k as i128 * w as i128)
            .sum();
        s.rem_euclid(self.modulus as i128) == 0
    }
}

/// The unique minimal generating set of the congruence monoid.
///
/// Every minimal element has coordinates <= modulus: modulus * e_i lies in N,
/// so anything with a larger coordinate splits off that multiple. Hence the
/// box [0, modulus]^r followed by a componentwise-minimality filter is exact.
pub fn hilbert_basis(monoid: &CongruenceMonoid) -> Result<Vec<Vec<u32>>> {
    let r = monoid.weights.len();
    let d = monoid.modulus;
    let members = enumerate_box(r, &vec![d; r], |v| monoid.contains(v));
    Ok(minimal_elements(members))
}

/// Minimal nonzero solutions of sum_i v_i * weights_i = 0 over N^r.
///
/// Coordinate bound per Huet: a coordinate with positive weight never exceeds
/// the largest magnitude among the negative weights in a minimal solution,
/// and symmetrically. With all weights of one sign the equation has only the
/// zero solution.
pub fn minimal_kernel_solutions(weights: &[i64]) -> Result<Vec<Vec<u32>>> {
    if weights.is_empty() {
        return Err(Error::EmptyInput);
    }
    if weights.iter().any(|&w| w == 0) {
        return Err(Error::Domain("kernel monoid weights must be nonzero".into()));
    }
    let max_pos = weights.iter().filter(|&&w| w > 0).map(|&w| w as u32).max();
    let max_neg = weights
        .iter()
        .filter(|&&w| w < 0)
        .map(|&w| w.unsigned_abs() as u32)
        .max();
    let (max_pos, max_neg) = match (max_pos, max_neg) {
        (Some(p), Some(n)) => (p, n),
        _ => return Ok(Vec::new()),
    };
    let bounds: Vec<u32> = weights
        .iter()
        .map(|&w| if w > 0 { max_neg } else { max_pos })
        .collect();
    let members = enumerate_box(weights.len(), &bounds, |v| {
        let s: i128 = v
            .iter()
            .zip(weights)
            .map(|(&k, &w)| k as i128 * w as i128)
            .sum();
        s == 0
    });
    Ok(minimal_elements(members))
}

fn enumerate_box(r: usize, bounds: &[u32], keep: impl Fn(&[u32]) -> bool) -> Vec<Vec<u32>> {
    let cells: u128 = bounds.iter().map(|&b| b as u128 + 1).product();
    assert!(cells <= 8_000_000, "box enumeration too large: {cells} cells");
    let mut out = Vec::new();
    let mut v = vec![0u32; r];
    loop {
        if v.iter().any(|&x| x != 0) && keep(&v) {
            out.push(v.clone());
        }
        // odometer increment
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if v[i] < bounds[i] {
                v[i] += 1;
                break;
            }
            v[i] = 0;
        }
    }
}

fn minimal_elements(mut members: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    members.sort();
    let dominated = |v: &[u32], by: &[u32]| v.iter().zip(by).all(|(a, b)| a >= b);
    let mut out: Vec<Vec<u32>> = Vec::new();
    for v in &members {
        if !out.iter().any(|u| u != v && dominated(v, u))
            && !members.iter().any(|u| u != v && dominated(v, u))
        {
            out.push(v.clone());
        }
    }
    out
}

/// Minimal element of the numerical monoid generated by `gens` that is
/// coprime to `modulus`, with the combination that reaches it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeWitness {
    pub value: u64,
    /// combination[i] copies of gens[i] sum to value
    pub combination: Vec<u64>,
}

/// Exists iff gcd(gcd(gens), modulus) = 1; 0 counts as a monoid element, so
/// modulus +-1 always yields 0 with the empty combination.
pub fn coprime_in_monoid(gens: &[u64], modulus: i64) -> Result<CoprimeWitness> {
    if gens.is_empty() {
        return Err(Error::EmptyInput);
    }
    if modulus == 0 {
        return Err(Error::Domain("modulus must be nonzero".into()));
    }
    let dd = modulus.unsigned_abs();
    if dd == 1 {
        return Ok(CoprimeWitness {
            value: 0,
            combination: vec![0; gens.len()],
        });
    }
    let mut g: u64 = 0;
    for &x in gens {
        g = gcd_u64(g, x);
    }
    if gcd_u64(g, dd) != 1 {
        return Err(Error::NoCoprimeExists {
            monoid_gcd: g,
            modulus: dd,
        });
    }
    // a coprime element exists below g*(frobenius bound of gens/g + a full
    // residue window), so the scan below always terminates with a find
    let reduced: Vec<u64> = gens.iter().filter(|&&x| x > 0).map(|&x| x / g).collect();
    let amin = *reduced.iter().min().expect("g coprime to dd > 1 forces a nonzero gen");
    let amax = *reduced.iter().max().unwrap();
    let frob = amin.saturating_sub(1).saturating_mul(amax.saturating_sub(1));
    let q: u64 = prime_factors(&Int::from(dd))
        .expect("dd > 1")
        .iter()
        .map(|p| p.to_u64().expect("factor of a u64"))
        .product();
    let bound = g
        .checked_mul(frob + 1 + q)
        .filter(|&b| b <= 20_000_000)
        .ok_or_else(|| Error::Domain("coprime search bound too large".into()))?;
    let n = bound as usize + 1;
    let mut parent: Vec<u32> = vec![u32::MAX; n];
    parent[0] = u32::MAX - 1; // reachable marker for 0
    for v in 0..n {
        if parent[v] == u32::MAX {
            continue;
        }
        let val = v as u64;
        if gcd_u64(val, dd) == 1 {
            let mut combination = vec![0u64; gens.len()];
            let mut cur = v;
            while cur != 0 {
                let gi = parent[cur] as usize;
                combination[gi] += 1;
                cur -= gens[gi] as usize;
            }
            return Ok(CoprimeWitness {
                value: val,
                combination,
            });
        }
        for (i, &gen) in gens.iter().enumerate() {
            if gen == 0 {
                continue;
            }
            let next = v + gen as usize;
            if next < n && parent[next] == u32::MAX {
                parent[next] = i as u32;
            }
        }
    }
    unreachable!("scan bound guarantees a coprime element when the gcd test passes")
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_of_set(&ints(&[15, 10, 6])).unwrap(), int(1));
        assert_eq!(gcd_of_set(&ints(&[0])).unwrap(), int(0));
        assert_eq!(gcd_of_set(&ints(&[-4, 6])).unwrap(), int(2));
        assert_eq!(gcd_of_set(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn gcd_witness_is_a_combination() {
        for xs in [vec![15, 10, 6], vec![-4, 6], vec![0, 0, 9], vec![7]] {
            let xs = ints(&xs);
            let (g, coeffs) = gcd_of_set_with_witness(&xs).unwrap();
            assert_eq!(g, gcd_of_set(&xs).unwrap());
            let combo: Int = xs.iter().zip(&coeffs).map(|(x, c)| x * c).sum();
            assert_eq!(combo, g);
        }
    }

    #[test]
    fn hilbert_basis_examples() {
        let m = CongruenceMonoid::new(vec![1, 1], 2).unwrap();
        assert_eq!(
            hilbert_basis(&m).unwrap(),
            vec![vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        // sign changes keep the same basis here: 1*1 + 1*(-1) = 0 = 0 mod 2
        let m = CongruenceMonoid::new(vec![1, -1], 2).unwrap();
        assert_eq!(
            hilbert_basis(&m).unwrap(),
            vec![vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        let m = CongruenceMonoid::new(vec![3, 5, 7], 1).unwrap();
        assert_eq!(
            hilbert_basis(&m).unwrap(),
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]
        );
        assert_eq!(
            CongruenceMonoid::new(vec![1, 1], 0).unwrap_err(),
            Error::InvalidModulus
        );
    }

    /// brute-force membership oracle: N-span of the basis restricted to a box
    fn spans_box(basis: &[Vec<u32>], monoid: &CongruenceMonoid, bound: u32) -> bool {
        let r = monoid.weights.len();
        let mut reach = std::collections::HashSet::new();
        reach.insert(vec![0u32; r]);
        let mut frontier: Vec<Vec<u32>> = vec![vec![0u32; r]];
        while let Some(v) = frontier.pop() {
            for b in basis {
                let w: Vec<u32> = v.iter().zip(b).map(|(a, c)| a + c).collect();
                if w.iter().all(|&x| x <= bound) && reach.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        let mut all = true;
        let mut v = vec![0u32; r];
        'outer: loop {
            if monoid.contains(&v) && !reach.contains(&v) {
                all = false;
            }
            let mut i = r;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                if v[i] < bound {
                    v[i] += 1;
                    continue 'outer;
                }
                v[i] = 0;
            }
        }
        all
    }

    #[test]
    fn hilbert_basis_generates_and_is_an_antichain() {
        let cases: Vec<(Vec<i64>, u32)> = vec![
            (vec![1, 1], 2),
            (vec![1, -1], 2),
            (vec![2, 3], 5),
            (vec![2, 3], 6),
            (vec![15, 10, 6], 2),
            (vec![3, -2, 5], 4),
            (vec![5, 7], 8),
            (vec![-3, -4], 6),
        ];
        for (weights, d) in cases {
            let m = CongruenceMonoid::new(weights, d).unwrap();
            let basis = hilbert_basis(&m).unwrap();
            for b in &basis {
                assert!(m.contains(b));
                for c in &basis {
                    if b != c {
                        assert!(
                            !b.iter().zip(c).all(|(x, y)| x >= y),
                            "basis not an antichain: {b:?} dominates {c:?}"
                        );
                    }
                }
            }
            assert!(spans_box(&basis, &m, 3 * m.modulus), "basis fails to span");
        }
    }

    #[test]
    fn kernel_solutions_examples() {
        assert_eq!(
            minimal_kernel_solutions(&[1, 1, -1]).unwrap(),
            vec![vec![0, 1, 1], vec![1, 0, 1]]
        );
        assert_eq!(
            minimal_kernel_solutions(&[2, 3, -5]).unwrap(),
            vec![vec![0, 5, 3], vec![1, 1, 1], vec![5, 0, 2]]
        );
        assert_eq!(
            minimal_kernel_solutions(&[1, -1, -1]).unwrap(),
            vec![vec![1, 0, 1], vec![1, 1, 0]]
        );
        assert!(minimal_kernel_solutions(&[2, 3]).unwrap().is_empty());
    }

    #[test]
    fn coprime_in_monoid_examples() {
        let w = coprime_in_monoid(&[6, 10, 15], 7).unwrap();
        assert_eq!(w.value, 6);
        assert_eq!(w.combination, vec![1, 0, 0]);
        let w = coprime_in_monoid(&[4, 6], 3).unwrap();
        assert_eq!(w.value, 4);
        assert_eq!(w.combination, vec![1, 0]);
        let w = coprime_in_monoid(&[5], 1).unwrap();
        assert_eq!(w.value, 0);
        assert_eq!(
            coprime_in_monoid(&[6, 10], 2).unwrap_err(),
            Error::NoCoprimeExists { monoid_gcd: 2, modulus: 2 }
        );
    }

    #[test]
    fn coprime_in_monoid_is_minimal() {
        // brute force over small generator sets
        let cases: Vec<(Vec<u64>, i64)> = vec![
            (vec![6, 10, 15], 7),
            (vec![4, 6], 3),
            (vec![9, 15], 4),
            (vec![2, 3], 6),
            (vec![14, 21], 5),
        ];
        for (gens, d) in cases {
            let w = coprime_in_monoid(&gens, d).unwrap();
            assert_eq!(gcd_u64(w.value, d.unsigned_abs()), 1);
            let reached: u64 = gens
                .iter()
                .zip(&w.combination)
                .map(|(g, c)| g * c)
                .sum();
            assert_eq!(reached, w.value);
            // no smaller monoid element is coprime to d
            let mut reach = vec![false; w.value as usize + 1];
            reach[0] = true;
            for v in 0..reach.len() {
                if !reach[v] {
                    continue;
                }
                if (v as u64) < w.value {
                    assert_ne!(gcd_u64(v as u64, d.unsigned_abs()), 1, "missed smaller {v}");
                }
                for &g in &gens {
                    if v + (g as usize) < reach.len() {
                        reach[v + g as usize] = true;
                    }
                }
            }
        }
    }

    #[test]
    fn prime_factor_examples() {
        let ps = prime_factors(&int(900)).unwrap();
        assert_eq!(format!("{ps}"), "{2, 3, 5}");
        assert!(prime_factors(&int(1)).unwrap().is_empty());
        let ps = prime_factors(&int(-7)).unwrap();
        assert_eq!(format!("{ps}"), "{7}");
        assert_eq!(prime_factors(&int(0)).unwrap_err(), Error::ZeroHasAllPrimes);
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime(&int(2)));
        assert!(is_prime(&int(97)));
        assert!(is_prime(&int(2147483647)));
        assert!(!is_prime(&int(1)));
        assert!(!is_prime(&int(561))); // carmichael
        assert!(!is_prime(&int(1000000007i64 * 3)));
        assert!(is_prime(&int(1000000007)));
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_of_set(&ints(&[2, 3, 5])).unwrap(), int(30));
        assert_eq!(lcm_of_set(&ints(&[2, 3, 6])).unwrap(), int(6));
        assert_eq!(lcm_of_set(&ints(&[4, -6])).unwrap(), int(12));
    }
}
