//! Saturation analysis of hypersurface rings: when the defining relation
//! avoids every ideal (X_i, X_j), the prime set Pi(B) is known exactly;
//! otherwise only an interval survives and the failing pairs are named.

use gradedlnd::analysis::analyze_ring;
use gradedlnd::ring::{AssertedFlag, Ring};

fn hypersurface(vars: &[(&str, i64)], relation: &str, leading: &str, assert: bool) -> Ring {
    let mut b = Ring::builder();
    for &(name, w) in vars {
        b = b.var(name, w);
    }
    if assert {
        b = b.assert_flag(AssertedFlag::Domain).assert_flag(AssertedFlag::RelationIrreducible);
    }
    b.relation(relation, leading).build().unwrap()
}

fn main() {
    let cases = [
        hypersurface(&[("X", 15), ("Y", 10), ("Z", 6)], "X^2 + Y^3 + Z^5", "X", true),
        hypersurface(&[("X1", 1), ("X2", 1), ("X3", 1)], "X1*X2 + X3^2", "X3", true),
    ];
    for ring in &cases {
        let rep = analyze_ring(ring).unwrap();
        println!("degrees {:?}", rep.d_list);
        println!("  Pi            {}", rep.pi.render());
        println!("  failing pairs {:?}", rep.failing_pairs);
        println!("  fully verified {}", rep.fully_verified());
        for h in &rep.hypotheses_log {
            println!("  [{}] {}", h.status, h.name);
        }
        println!();
    }
}
