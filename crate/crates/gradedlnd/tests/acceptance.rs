//! Acceptance suite. One test per criterion, each printing a single
//! pass line; a failure panics with the offending instance.

use std::collections::{BTreeSet, HashMap};

use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use gradedlnd::analysis::{analyze_ring, pb_analyze, PBRing, PiSet};
use gradedlnd::cylinder::{
    cylinder_to_lnd, dehomogenize, lnd_to_cylindrical_candidate, veronese_to_derivation,
    CandidateVerdict, CylinderWitness,
};
use gradedlnd::derivation::{certify_lnd, slice_decompose, Derivation};
use gradedlnd::extension::{jacobian_lift, EtalePresentation};
use gradedlnd::ring::{
    veronese_generators, LocalizedElem, Ring, RingElem, Strategy, VarSpec,
};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn prime_factors(mut n: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            out.insert(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.insert(n);
    }
    out
}

/// Brute-force oracle from the defining arithmetic: degrees d_i = lcm/a_i,
/// e_i = gcd of the other degrees, Pi = primes of prod e_i, saturated iff
/// Pi is empty, pointwise iff the d_i are pairwise coprime.
fn pb_oracle(a: &[u64]) -> (BTreeSet<u64>, bool, bool) {
    let l = a.iter().copied().fold(1, lcm);
    let d: Vec<u64> = a.iter().map(|ai| l / ai).collect();
    let n = d.len();
    let mut pi = BTreeSet::new();
    for i in 0..n {
        let e_i = (0..n)
            .filter(|&j| j != i)
            .map(|j| d[j])
            .fold(0, gcd);
        pi.extend(prime_factors(e_i));
    }
    let saturated = pi.is_empty();
    let mut pointwise = true;
    for i in 0..n {
        for j in i + 1..n {
            if gcd(d[i], d[j]) != 1 {
                pointwise = false;
            }
        }
    }
    (pi, saturated, pointwise)
}

fn pi_as_u64(pi: &PiSet) -> BTreeSet<u64> {
    match pi {
        PiSet::Exact(s) => s.iter().map(|p| p.to_u64().unwrap()).collect(),
        other => panic!("expected exact Pi, got {other:?}"),
    }
}

fn random_tuples(rng: &mut StdRng, count: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(3..=5usize);
        let t: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=30u64)).collect();
        out.push(t);
    }
    out
}

#[test]
fn criterion_1_pb_classifier_matches_oracle() {
    let mut rng = StdRng::seed_from_u64(2601);
    for t in random_tuples(&mut rng, 100) {
        let (pi, saturated, pointwise) = pb_oracle(&t);
        let rep = pb_analyze(&PBRing::new(t.clone()).unwrap()).unwrap();
        assert_eq!(pi_as_u64(&rep.pi), pi, "Pi mismatch for {t:?}");
        assert_eq!(rep.saturated_codim1, saturated, "saturation mismatch for {t:?}");
        assert_eq!(rep.pointwise_saturated, pointwise, "pointwise mismatch for {t:?}");
    }

    let rep = pb_analyze(&PBRing::new(vec![2, 3, 5]).unwrap()).unwrap();
    assert_eq!(pi_as_u64(&rep.pi), BTreeSet::from([2, 3, 5]));
    assert!(!rep.saturated_codim1);
    assert!(!rep.pointwise_saturated);

    let rep = pb_analyze(&PBRing::new(vec![2, 3, 6]).unwrap()).unwrap();
    assert!(pi_as_u64(&rep.pi).is_empty());
    assert!(rep.saturated_codim1);
    assert!(rep.pointwise_saturated);

    let rep = pb_analyze(&PBRing::new(vec![2, 2, 3]).unwrap()).unwrap();
    assert_eq!(pi_as_u64(&rep.pi), BTreeSet::from([3]));
    assert!(!rep.saturated_codim1);
    assert!(!rep.pointwise_saturated);

    println!("criterion 1: pass (100 random tuples + 3 curated vs gcd/lcm oracle)");
}

#[test]
fn criterion_2_saturation_consistency() {
    let mut rng = StdRng::seed_from_u64(2602);
    for t in random_tuples(&mut rng, 100) {
        let rep = pb_analyze(&PBRing::new(t.clone()).unwrap()).unwrap();
        let pi_empty = pi_as_u64(&rep.pi).is_empty();
        assert_eq!(
            rep.saturated_codim1, pi_empty,
            "saturated_codim1 must equal Pi = {{}} for {t:?}"
        );
        if rep.pointwise_saturated {
            assert!(rep.saturated_codim1, "pointwise must imply saturated for {t:?}");
        }
    }
    println!("criterion 2: pass (saturated iff Pi empty; pointwise implies saturated)");
}

/// B = Q[u^{+-1}, y][T]/(T^d - u^d), everything in degree 1.
fn cyclic_cover(d: u32) -> Ring {
    let ring = Ring::builder()
        .inverted_var("u", 1)
        .var("y", 1)
        .var("T", 1)
        .build()
        .unwrap();
    let rel = ring.parse(&format!("T^{d} - u^{d}")).unwrap();
    let t = ring.var_index("T").unwrap();
    ring.with_extra_relation(&rel, t, true).unwrap()
}

/// Random element with monomials u^a y^b, weighted degree within +-4.
/// `y_free` restricts to Laurent monomials in u alone.
fn random_base_elem(rng: &mut StdRng, ring: &Ring, allow_zero: bool, y_free: bool) -> RingElem {
    loop {
        let mut e = ring.zero();
        for _ in 0..rng.gen_range(0..=2usize) {
            let a = rng.gen_range(-4..=4i64);
            let b = if y_free { 0 } else { rng.gen_range(0..=4i64) };
            if (a + b).abs() > 4 {
                continue;
            }
            let c = rng.gen_range(-3..=3i64);
            let m = ring.monomial(&[a, b, 0], gradedlnd::arith::rat_int(c)).unwrap();
            e = e.add(&m);
        }
        if allow_zero || !e.is_zero() {
            return e;
        }
    }
}

#[test]
fn criterion_3_and_4_jacobian_lift_and_lnd_transfer() {
    let mut rng = StdRng::seed_from_u64(2603);
    let mut nilpotent_transfers = 0;
    for d in [2u32, 3, 5] {
        let ring = cyclic_cover(d);
        let pres = EtalePresentation::from_names(ring.clone(), &["T"]).unwrap();
        let u = ring.parse("u").unwrap();
        let y = ring.parse("y").unwrap();
        for k in 0..10 {
            // half the instances kill u and keep the image of y inside
            // Q[u^{+-1}], so the base derivation is locally nilpotent
            let lnd_case = k % 2 == 0;
            let du = if lnd_case { ring.zero() } else { random_base_elem(&mut rng, &ring, true, false) };
            let dy = random_base_elem(&mut rng, &ring, false, lnd_case);
            let images = vec![du.clone(), dy.clone(), ring.zero()];
            let lift = jacobian_lift(&pres, &images).unwrap();

            // extends the base derivation exactly
            assert_eq!(lift.apply(&u), du);
            assert_eq!(lift.apply(&y), dy);

            // Leibniz over the defining relation vanishes exactly:
            // d T^{d-1} D(T) - d u^{d-1} D(u) = 0
            let td = ring.parse(&format!("{d}*T^{}", d - 1)).unwrap();
            let ud = ring.parse(&format!("{d}*u^{}", d - 1)).unwrap();
            let lhs = td.mul(&lift.apply(&ring.parse("T").unwrap()));
            let rhs = ud.mul(&du);
            assert!(lhs.sub(&rhs).is_zero(), "relation not in the kernel, d={d} k={k}");

            // identical result when every division step rewrites in the
            // opposite order
            let pres2 = pres.with_strategy(Strategy::LowFirst).unwrap();
            let ring2 = pres2.ring();
            let images2: Vec<RingElem> =
                images.iter().map(|e| ring2.convert(e).unwrap()).collect();
            let lift2 = jacobian_lift(&pres2, &images2).unwrap();
            let a: Vec<String> = lift.images().iter().map(|x| x.to_string()).collect();
            let b: Vec<String> = lift2.images().iter().map(|x| x.to_string()).collect();
            assert_eq!(a, b, "strategy permutation changed the lift, d={d} k={k}");

            // criterion 4: when the base derivation is certified locally
            // nilpotent, so is its lift
            if du.is_zero() {
                let base = Derivation::new(ring.clone(), vec![ring.zero(), dy.clone(), ring.zero()])
                    .unwrap();
                if certify_lnd(&base, 64).unwrap().is_nilpotent() {
                    assert!(
                        certify_lnd(&lift, 64).unwrap().is_nilpotent(),
                        "lift of a nilpotent base failed certification, d={d} k={k}"
                    );
                    nilpotent_transfers += 1;
                }
            }
        }
    }
    assert!(nilpotent_transfers >= 10, "too few nilpotent instances: {nilpotent_transfers}");
    println!("criterion 3: pass (30 lifts exact, relation in kernel, order-permutation stable)");
    println!("criterion 4: pass ({nilpotent_transfers} locally nilpotent transfers certified)");
}

/// Membership oracle in direction space: coordinates split each inverted
/// variable into a + and a - direction so every generator is a nonnegative
/// vector. Cancellation between generators appears as slack multiples of
/// the (+,-) pair vectors; slack up to 2 per inverted variable is searched.
struct Membership {
    gens: Vec<Vec<u32>>,
    memo: HashMap<Vec<u32>, bool>,
}

impl Membership {
    fn reachable(&mut self, w: &[u32]) -> bool {
        if w.iter().all(|&x| x == 0) {
            return true;
        }
        if let Some(&r) = self.memo.get(w) {
            return r;
        }
        let mut ok = false;
        for g in &self.gens.clone() {
            if g.iter().zip(w).all(|(a, b)| a <= b) {
                let next: Vec<u32> = w.iter().zip(g).map(|(b, a)| b - a).collect();
                if self.reachable(&next) {
                    ok = true;
                    break;
                }
            }
        }
        self.memo.insert(w.to_vec(), ok);
        ok
    }
}

fn to_dirs(exps: &[i64], inverted: &[bool]) -> Vec<u32> {
    let mut v: Vec<u32> = exps.iter().map(|&e| if e > 0 { e as u32 } else { 0 }).collect();
    for (i, &inv) in inverted.iter().enumerate() {
        if inv {
            v.push(if exps[i] < 0 { (-exps[i]) as u32 } else { 0 });
        }
    }
    v
}

#[test]
fn criterion_5_veronese_generation() {
    let mut rng = StdRng::seed_from_u64(2605);
    let mut rings_checked = 0;
    let mut monomials_checked = 0u64;
    while rings_checked < 50 {
        let r = rng.gen_range(1..=3usize);
        let vars: Vec<VarSpec> = (0..r)
            .map(|i| {
                let mut w = 0;
                while w == 0 {
                    w = rng.gen_range(-5..=5i64);
                }
                VarSpec {
                    name: format!("x{i}"),
                    weight: w,
                    inverted: rng.gen_bool(0.4),
                }
            })
            .collect();
        let mut b = Ring::builder();
        for v in &vars {
            b = if v.inverted { b.inverted_var(&v.name, v.weight) } else { b.var(&v.name, v.weight) };
        }
        let ring = b.build().unwrap();
        let d = rng.gen_range(1..=6u32);
        let desc = veronese_generators(&ring, d).unwrap();
        let inverted: Vec<bool> = vars.iter().map(|v| v.inverted).collect();
        let weights: Vec<i64> = vars.iter().map(|v| v.weight).collect();

        let gens: Vec<Vec<u32>> = desc.exponents.iter().map(|e| to_dirs(e, &inverted)).collect();
        let ndirs = r + inverted.iter().filter(|&&i| i).count();
        let mut oracle = Membership { gens, memo: HashMap::new() };

        // every exponent vector in the box, its degree divisible by d
        let ranges: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                let hi = 2 * d as i64;
                if inverted[i] { (-hi..=hi).collect() } else { (0..=hi).collect() }
            })
            .collect();
        let mut stack = vec![(0usize, Vec::new())];
        while let Some((i, exps)) = stack.pop() {
            if i == r {
                let deg: i64 = exps.iter().zip(&weights).map(|(e, w)| e * w).sum();
                if deg.rem_euclid(d as i64) != 0 {
                    continue;
                }
                let target = to_dirs(&exps, &inverted);
                // search slack 0..=2 on each inverted pair
                let pairs: Vec<(usize, usize)> = inverted
                    .iter()
                    .enumerate()
                    .filter(|(_, &inv)| inv)
                    .enumerate()
                    .map(|(k, (i, _))| (i, r + k))
                    .collect();
                let mut found = false;
                let slack_count = 3usize.pow(pairs.len() as u32);
                'slack: for mask in 0..slack_count {
                    let mut w = target.clone();
                    let mut m = mask;
                    for &(plus, minus) in &pairs {
                        let s = (m % 3) as u32;
                        m /= 3;
                        w[plus] += s;
                        w[minus] += s;
                    }
                    debug_assert_eq!(w.len(), ndirs);
                    if oracle.reachable(&w) {
                        found = true;
                        break 'slack;
                    }
                }
                assert!(
                    found,
                    "monomial {exps:?} of B^({d}) not expressible; weights {weights:?}, inverted {inverted:?}"
                );
                monomials_checked += 1;
                continue;
            }
            for &e in &ranges[i] {
                let mut next = exps.clone();
                next.push(e);
                stack.push((i + 1, next));
            }
        }
        rings_checked += 1;
    }
    println!(
        "criterion 5: pass (50 random rings, {monomials_checked} subring monomials expressed in the generators)"
    );
}

#[test]
fn criterion_6_slice_reconstruction() {
    let mut rng = StdRng::seed_from_u64(2606);
    let ring = Ring::builder().var("x", 1).var("y", 1).build().unwrap();
    let d = Derivation::from_named_images(&ring, &[("x", "1")]).unwrap();
    let s = ring.parse("x").unwrap();
    for k in 0..50 {
        let mut e = ring.zero();
        for _ in 0..rng.gen_range(1..=4usize) {
            let a = rng.gen_range(0..=4i64);
            let b = rng.gen_range(0..=4i64);
            if a + b > 6 {
                continue;
            }
            let c = rng.gen_range(-4..=4i64);
            e = e.add(&ring.monomial(&[a, b], gradedlnd::arith::rat_int(c)).unwrap());
        }
        let dec = slice_decompose(&d, &s, &e, 64).unwrap();
        let mut rebuilt = ring.zero();
        let mut s_pow = ring.one();
        for coeff in &dec.coefficients {
            assert!(d.apply(coeff).is_zero(), "coefficient not in the kernel, instance {k}");
            rebuilt = rebuilt.add(&coeff.mul(&s_pow));
            s_pow = s_pow.mul(&s);
        }
        assert_eq!(rebuilt, e, "slice reconstruction failed, instance {k}");
    }
    println!("criterion 6: pass (50 slice decompositions rebuilt exactly, coefficients in ker D)");
}

#[test]
fn criterion_7_top_homogeneous_part_is_lnd() {
    let mut rng = StdRng::seed_from_u64(2607);
    for k in 0..20 {
        let n = rng.gen_range(2..=4usize);
        let mut b = Ring::builder();
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        for name in &names {
            b = b.var(name, rng.gen_range(1..=4i64));
        }
        let ring = b.build().unwrap();
        let mut images = vec![ring.zero()];
        for i in 1..n {
            // image in the variables below x_i, never zero for x_1
            let mut img = ring.zero();
            let terms = if i == 1 { 1 } else { rng.gen_range(0..=2usize) };
            for _ in 0..terms.max(usize::from(i == 1)) {
                let mut exps = vec![0i64; n];
                for e in exps.iter_mut().take(i) {
                    *e = rng.gen_range(0..=2i64);
                }
                let c = rng.gen_range(1..=3i64);
                img = img.add(&ring.monomial(&exps, gradedlnd::arith::rat_int(c)).unwrap());
            }
            images.push(img);
        }
        let d = Derivation::new(ring.clone(), images).unwrap();
        let top = d.top_homogeneous_part().unwrap();
        let cert = certify_lnd(&top, 64).unwrap();
        assert!(cert.is_nilpotent(), "top part not certified nilpotent, instance {k}");
    }
    println!("criterion 7: pass (20 triangular derivations, top homogeneous part certified LND)");
}

#[test]
fn criterion_8_cylinder_round_trip() {
    let ring = Ring::builder().var("x", 1).var("y", 1).build().unwrap();
    let x = ring.parse("x").unwrap();
    let y = ring.parse("y").unwrap();
    let w = CylinderWitness::new(
        x.clone(),
        LocalizedElem::new(x.clone(), y.clone(), 1),
        Vec::new(),
    )
    .unwrap();
    let (vd, n) = cylinder_to_lnd(&ring, &w, 16).unwrap();
    assert_eq!(n, 0);
    let der = veronese_to_derivation(&vd).unwrap();
    assert!(der.apply(&x).is_zero());
    assert_eq!(der.apply(&y), x);

    let cert = certify_lnd(&der, 64).unwrap();
    let cand = lnd_to_cylindrical_candidate(&der, &cert, &[x.clone()], 16).unwrap();
    assert_eq!(cand.verdict, CandidateVerdict::Certified);
    assert_eq!(cand.h.as_ref().unwrap(), &x);
    let witness = cand.witness.as_ref().unwrap();
    assert_eq!(witness.t, LocalizedElem::new(x.clone(), y.clone(), 1));

    // rho' inverts rho on class-0 elements of the quotient by x^2 - 1
    let mut rng = StdRng::seed_from_u64(2608);
    let h = ring.parse("x^2").unwrap();
    let de = dehomogenize(&ring, &h).unwrap();
    assert_eq!(de.modulus(), 2);
    for k in 0..10 {
        let mut e = ring.zero();
        while e.is_zero() {
            for _ in 0..rng.gen_range(1..=3usize) {
                let a = rng.gen_range(0..=3i64);
                let b = rng.gen_range(0..=3i64);
                if (a + b) % 2 != 0 {
                    continue;
                }
                let c = rng.gen_range(-3..=3i64);
                e = e.add(&ring.monomial(&[a, b], gradedlnd::arith::rat_int(c)).unwrap());
            }
        }
        let s = de.rho(&e);
        let lifted = de.rho_prime_inverse(&s).unwrap();
        assert_eq!(de.rho(&lifted.numer), s, "rho' round trip failed, instance {k}");
    }
    println!("criterion 8: pass (witness round trip certified; 10 rho' round trips exact)");
}

#[test]
fn criterion_9_hypothesis_honesty() {
    // X1*X2 + X3^2: contained in (X1, X3), so Pi is only bounded
    let ring = {
        let base = Ring::builder().var("X1", 1).var("X2", 1).var("X3", 1).build().unwrap();
        let f = base.parse("X1*X2 + X3^2").unwrap();
        let lead = base.var_index("X3").unwrap();
        base.with_extra_relation(&f, lead, true).unwrap()
    };
    let rep = analyze_ring(&ring).unwrap();
    assert!(
        matches!(rep.pi, PiSet::Interval { .. }),
        "expected an interval-valued Pi, got {:?}",
        rep.pi
    );
    assert!(
        rep.failing_pairs.contains(&(1, 3)),
        "failing pair (1,3) not reported: {:?}",
        rep.failing_pairs
    );

    // exit code and report distinguish verified from asserted hypotheses
    let bin = env!("CARGO_BIN_EXE_gradedlnd");
    let dir = std::env::temp_dir().join("gradedlnd-acceptance");
    std::fs::create_dir_all(&dir).unwrap();

    let verified = dir.join("verified.spec");
    std::fs::write(&verified, "ring\n  var x 1\n  var y 2\nend\n").unwrap();
    let out = std::process::Command::new(bin)
        .args(["analyze", verified.to_str().unwrap(), "--format", "structured"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "verified analysis must exit 0:\n{text}");
    assert!(text.contains("verified=true"), "{text}");

    let asserted = dir.join("asserted.spec");
    std::fs::write(
        &asserted,
        "ring\n  var X 15\n  var Y 10\n  var Z 6\n  relation X^2 + Y^3 + Z^5 leading X\n  assert domain\n  assert relation-irreducible\nend\n",
    )
    .unwrap();
    let out = std::process::Command::new(bin)
        .args(["analyze", asserted.to_str().unwrap(), "--format", "structured"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(3), "asserted analysis must exit 3:\n{text}");
    assert!(text.contains("=asserted:") || text.contains("asserted: "), "{text}");
    assert!(text.contains("verified=false"), "{text}");

    println!("criterion 9: pass (interval Pi with failing pair (1,3); exit codes 0/3 separate verified from asserted)");
}
