//! The two-way bridge between cylinders and locally nilpotent derivations:
//! a witness (f, t, R) produces a homogeneous LND of the Veronese subring,
//! and an LND with a suitable kernel element is certified back into a
//! witness over the dehomogenization.

use gradedlnd::cylinder::{
    cylinder_to_lnd, lnd_to_cylindrical_candidate, veronese_to_derivation, CylinderWitness,
};
use gradedlnd::derivation::{certify_lnd, Derivation};
use gradedlnd::ring::{LocalizedElem, Ring};

fn main() {
    // witness -> derivation on the plane: f = x, t = y/x
    let ring = Ring::builder().var("x", 1).var("y", 1).build().unwrap();
    let f = ring.var("x").unwrap();
    let t = LocalizedElem::new(f.clone(), ring.var("y").unwrap(), 1);
    let w = CylinderWitness::new(f, t, vec![]).unwrap();
    let (vd, n) = cylinder_to_lnd(&ring, &w, 16).unwrap();
    println!("witness (f = x, t = y/x) gives f^{n} Delta' with images:");
    for (g, img) in vd.generators.iter().zip(&vd.images) {
        println!("  D({g}) = {img}");
    }
    let d = veronese_to_derivation(&vd).unwrap();
    println!("as a derivation of B itself: {d}");

    // derivation -> witness on the quadric cone, presented on its generators
    let cone = Ring::builder()
        .var("X", 2)
        .var("Y", 2)
        .var("Z", 2)
        .relation("Y^2 - X*Z", "Y")
        .build()
        .unwrap();
    let d = Derivation::from_named_images(&cone, &[("Y", "X"), ("Z", "2*Y")]).unwrap();
    let cert = certify_lnd(&d, 16).unwrap();
    println!("\ncone derivation {d}: nilpotent = {}", cert.is_nilpotent());
    let out = lnd_to_cylindrical_candidate(&d, &cert, &[cone.var("X").unwrap()], 8).unwrap();
    println!("verdict {}", out.verdict);
    println!("  h = {}", out.h.as_ref().unwrap());
    println!("  beta = {}", out.beta.as_ref().unwrap());
    let back = out.witness.unwrap();
    println!("  t = {}", back.t);

    // and the recovered witness rebuilds the derivation we started from
    let (vd, _) = cylinder_to_lnd(&cone, &back, 8).unwrap();
    let rebuilt = veronese_to_derivation(&vd).unwrap();
    println!("witness rebuilds the same derivation: {}", rebuilt == d);
}
