//! Extending a derivation through relations with a unit Jacobian: the
//! images of the adjoined roots are forced, and the extension is exact.

use gradedlnd::derivation::certify_lnd;
use gradedlnd::extension::{jacobian_lift_named, EtalePresentation};
use gradedlnd::ring::Ring;

fn main() {
    // B = Q[u^{+-1}][T]/(T^2 - u), a double cover of the punctured line
    let base = Ring::builder().inverted_var("u", 2).var("T", 1).build().unwrap();
    let rel = base.parse("T^2 - u").unwrap();
    let t = base.var_index("T").unwrap();
    let ring = base.with_extra_relation(&rel, t, true).unwrap();

    let pres = EtalePresentation::from_names(ring.clone(), &["T"]).unwrap();
    println!("jacobian determinant: {}", pres.jacobian_det());

    let lift = jacobian_lift_named(&pres, &[("u", "u")]).unwrap();
    println!("u -> u extends to: {lift}");

    // towers work the same way: adjoin a square and a cube root at once
    let base = Ring::builder()
        .inverted_var("u", 2)
        .var("T", 1)
        .var("S", 3)
        .relation("T^2 - u", "T")
        .relation("S^2 - u^3", "S")
        .build()
        .unwrap();
    let pres = EtalePresentation::from_names(base, &["T", "S"]).unwrap();
    let lift = jacobian_lift_named(&pres, &[("u", "u")]).unwrap();
    println!("tower extension:   {lift}");
    println!("certificate:       {}", certify_lnd(&lift, 16).unwrap());
}
