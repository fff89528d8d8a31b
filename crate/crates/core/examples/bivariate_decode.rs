// Decoding through a bivariate interpolant and its polynomial roots.

use std::error::Error;

use ldpir::listdecode::{interpolate_qbase, monomial_count, rr_roots};
use ldpir::protocol::reconstruct_g2;
use ldpir::{FieldModulus, HermiteSample, Polynomial};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = FieldModulus::new(1031)?;
    let (k, b, wt) = (6, 3, 1);
    let cap = 2 * (k - b) - 1;
    println!("k={k} b={b} wt={wt}: weighted degree cap {cap}, {} unknowns for {} constraints", monomial_count(wt, cap), 2 * k);

    let honest = Polynomial::new(m, vec![500, 21]);
    let fake = Polynomial::new(m, vec![9, 1000]);
    let tuples: Vec<HermiteSample> = (1..=k as u64)
        .map(|x| {
            let f = if x % 2 == 0 { &honest } else { &fake };
            HermiteSample::from_raw(m, x * 10, f.eval_raw(x * 10), f.derivative().eval_raw(x * 10))
        })
        .collect();

    let q = interpolate_qbase(&tuples, wt, cap)?;
    println!("interpolant has α-degree {} and weighted degree {:?}", q.rho(), q.weighted_degree());
    for s in &tuples {
        assert!(q.eval(s.lambda, s.alpha).is_zero());
    }
    let roots = rr_roots(&q, wt);
    println!("roots in α: {roots:?}");

    let list = reconstruct_g2(&tuples, wt, b)?;
    println!("after the agreement filter: {:?}", list.values);
    assert!(list.contains(m.elem(500)));
    assert!(list.contains(m.elem(9)));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
