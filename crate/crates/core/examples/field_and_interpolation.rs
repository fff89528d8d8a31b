// Prime-field arithmetic, Hermite interpolation and root finding.

use std::error::Error;

use ldpir::poly::{hermite_interpolate, order1_agreement_count, poly_roots};
use ldpir::{FieldModulus, HermiteSample, Polynomial};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = FieldModulus::new(131)?;
    let (a, b) = (m.elem(100), m.elem(50));
    println!("in {m}: {a} + {b} = {}, {a} · {b} = {}, 1/{a} = {}", a + b, a * b, a.inv()?);

    // f(λ) = 5 + 3λ + 7λ², sampled with its derivative at two points
    let f = Polynomial::new(m, vec![5, 3, 7]);
    let df = f.derivative();
    let samples: Vec<HermiteSample> = [1, 2]
        .iter()
        .map(|&x| HermiteSample::from_raw(m, x, f.eval_raw(x), df.eval_raw(x)))
        .collect();
    let g = hermite_interpolate(&samples)?;
    println!("two order-1 samples of {f:?} interpolate to {g:?}");
    assert_eq!(g, f);
    println!("agreement with its own samples: {}", order1_agreement_count(&g, &samples));

    let split = Polynomial::new(m, vec![m.neg(3), 1])
        .mul(&Polynomial::new(m, vec![m.neg(17), 1]))
        .mul(&Polynomial::new(m, vec![m.neg(99), 1]));
    let roots = poly_roots(&split)?;
    println!("roots of {split:?}: {roots:?}");
    assert_eq!(roots.iter().map(|r| r.value()).collect::<Vec<_>>(), vec![3, 17, 99]);

    let big = FieldModulus::new((1 << 61) - 1)?;
    let q = Polynomial::new(big, vec![big.neg(12345), 0, 1]);
    println!("square roots of 12345 mod 2^61-1: {:?}", poly_roots(&q)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
