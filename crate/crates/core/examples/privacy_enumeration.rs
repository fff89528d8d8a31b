// Exhaustive check that t servers see the same query distribution for any
// two indices, while t+1 servers can tell them apart.

use std::error::Error;

use itertools::Itertools;
use ldpir::encode::{PirParams, Scheme};
use ldpir::oracle::{privacy_enumerate, OracleLimits};
use ldpir::FieldModulus;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = FieldModulus::new(5)?;
    let limits = OracleLimits::default();
    for t in [1, 2] {
        // m = 2, w = 1: two indices
        let params = PirParams::new(Scheme::Wy, 2, 4, 3, t, 0, 1, p)?;
        for coalition in (1..=4).combinations(t) {
            let (d1, d2) = privacy_enumerate(&params, 1, 2, &coalition, &limits)?;
            println!("t={t} servers {coalition:?}: {} distinct views, identical = {}", d1.len(), d1 == d2);
            assert_eq!(d1, d2);
        }
        let bigger: Vec<usize> = (1..=t + 1).collect();
        let (d1, d2) = privacy_enumerate(&params, 1, 2, &bigger, &limits)?;
        println!("t={t} servers {bigger:?}: identical = {}", d1 == d2);
        assert_ne!(d1, d2);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
