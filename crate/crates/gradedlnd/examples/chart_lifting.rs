//! Lifting a derivation of a Veronese subring B^(d) back to B on the chart
//! where a variable of degree coprime to d is invertible.

use gradedlnd::derivation::{certify_lnd, VeroneseDerivation};
use gradedlnd::extension::veronese_chart_lift;
use gradedlnd::ring::{veronese_generators, Ring};

fn main() {
    // B = Q[x^{+-1}, y] with deg x = 1, deg y = 2; B^(2) is generated by
    // x^-2, y, x^2
    let ring = Ring::builder().inverted_var("x", 1).var("y", 2).build().unwrap();
    let desc = veronese_generators(&ring, 2).unwrap();
    let gens: Vec<String> = desc.generators.iter().map(|g| g.to_string()).collect();
    println!("B^(2) generators: {}", gens.join(", "));

    // delta kills x^{+-2} and sends y to x^2
    let images = vec![
        ring.zero(),
        ring.parse("x^2").unwrap(),
        ring.zero(),
    ];
    let delta = VeroneseDerivation::new(&desc, &ring, images).unwrap();
    let lift = veronese_chart_lift(&ring.parse("x").unwrap(), &delta).unwrap();
    println!("chart lift:       {lift}");
    println!("certificate:      {}", certify_lnd(&lift, 16).unwrap());
}
