//! Derivations on graded rings: evaluation, nilpotency certificates, the
//! top homogeneous part, and slice decompositions.

use gradedlnd::derivation::{certify_lnd, slice_decompose, Derivation};
use gradedlnd::ring::Ring;

fn main() {
    let ring = Ring::builder().var("x", 1).var("y", 1).build().unwrap();

    // triangular, hence locally nilpotent
    let d = Derivation::from_named_images(&ring, &[("x", "y")]).unwrap();
    println!("D: {d}");
    println!("  certificate: {}", certify_lnd(&d, 64).unwrap());

    // the Euler derivation is homogeneous but never nilpotent
    let euler = Derivation::from_named_images(&ring, &[("x", "x"), ("y", "y")]).unwrap();
    println!("E: {euler}");
    println!("  certificate: {}", certify_lnd(&euler, 64).unwrap());

    // an inhomogeneous derivation and its top homogeneous part
    let mixed = Derivation::from_named_images(&ring, &[("x", "y + y^2")]).unwrap();
    let top = mixed.top_homogeneous_part().unwrap();
    println!("D': {mixed}");
    println!("  top part: {top}");
    println!("  top part certificate: {}", certify_lnd(&top, 64).unwrap());

    // a slice s (D(s) = 1) splits every element over the kernel
    let ds = Derivation::from_named_images(&ring, &[("y", "1")]).unwrap();
    let s = ring.parse("y").unwrap();
    let e = ring.parse("x*y^2 + y + x").unwrap();
    let dec = slice_decompose(&ds, &s, &e, 64).unwrap();
    let cs: Vec<String> = dec.coefficients.iter().map(|c| c.to_string()).collect();
    println!("{e} = sum c_j y^j with c = [{}]", cs.join(", "));
}
