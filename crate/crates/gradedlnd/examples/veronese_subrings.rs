//! Generators of Veronese subrings B^(d) = sum of the graded pieces B_{di},
//! computed as the Hilbert basis of a congruence monoid on the exponents.

use gradedlnd::extension::chi_d_generators;
use gradedlnd::ring::{veronese_generators, Ring};

fn main() {
    let plane = Ring::builder().var("x", 1).var("y", 1).build().unwrap();
    for d in [2u32, 3] {
        let desc = veronese_generators(&plane, d).unwrap();
        let gens: Vec<String> = desc.generators.iter().map(|g| g.to_string()).collect();
        println!("{:18} generated by {}", format!("Q[x,y]^({d})"), gens.join(", "));
    }

    let laurent = Ring::builder().inverted_var("x", 1).var("y", 2).build().unwrap();
    let desc = veronese_generators(&laurent, 2).unwrap();
    let gens: Vec<String> = desc.generators.iter().map(|g| g.to_string()).collect();
    println!("{:18} generated by {}", "Q[x^-1,x,y]^(2)", gens.join(", "));

    // homogeneous monomials of degree coprime to d certify e(B^(d)) = 1
    let weighted = Ring::builder().var("x", 2).var("y", 3).build().unwrap();
    let chi = chi_d_generators(&weighted, 6).unwrap();
    let gens: Vec<String> = chi.iter().map(|g| g.to_string()).collect();
    println!("deg coprime to 6 in Q[x(2),y(3)]: {}", gens.join(", "));
}
