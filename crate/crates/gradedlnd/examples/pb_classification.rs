//! Saturation classification of Pham-Brieskorn rings
//! B(a) = Q[X_1..X_n]/(X_1^{a_1} + ... + X_n^{a_n}), graded by
//! deg X_i = lcm(a)/a_i.

use gradedlnd::analysis::{pb_analyze, PBRing};

fn main() {
    for a in [vec![2, 3, 5], vec![2, 3, 6], vec![2, 2, 3], vec![3, 4, 5, 7]] {
        let pb = PBRing::new(a.clone()).unwrap();
        let rep = pb_analyze(&pb).unwrap();
        println!("B{a:?}");
        println!("  degrees           {:?}", rep.d_list);
        println!("  e-invariants      {:?}", rep.e_list);
        println!("  Pi                {}", rep.pi.render());
        println!("  saturated codim 1 {}", rep.saturated_codim1);
        println!("  pointwise         {}", rep.pointwise_saturated);
        for h in &rep.hypotheses_log {
            println!("  [{}] {}: {}", h.status, h.name, h.detail);
        }
        println!();
    }
}
