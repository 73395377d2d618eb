//! Dehomogenization S = B/(h - 1): the quotient keeps a Z/m grading from
//! the degrees, rho is the projection, and rho' identifies S with the
//! degree-0 part of B localized at h.

use gradedlnd::cylinder::dehomogenize;
use gradedlnd::derivation::Derivation;
use gradedlnd::ring::Ring;

fn main() {
    let ring = Ring::builder().var("x", 1).var("y", 1).build().unwrap();
    let h = ring.parse("x^2").unwrap();
    let de = dehomogenize(&ring, &h).unwrap();
    println!("h = {}, residue modulus {}", de.h(), de.modulus());

    for text in ["x", "y", "x*y", "x^2 + y^2"] {
        let e = ring.parse(text).unwrap();
        let s = de.rho(&e);
        let class = de
            .residue_class(&s)
            .map(|c| c.to_string())
            .unwrap_or_else(|| "mixed".into());
        println!("rho({text}) = {s}   class {class}");
    }

    // class-0 elements pull back to the localization B_(h)
    let s = de.rho(&ring.parse("x*y").unwrap());
    println!("rho'^{{-1}}({s}) = {}", de.rho_prime_inverse(&s).unwrap());

    // derivations with h in the kernel descend along rho
    let d = Derivation::from_named_images(&ring, &[("y", "x")]).unwrap();
    let dbar = de.lift_derivation(&d).unwrap();
    println!("D = ({d}) descends to ({dbar})");
}
