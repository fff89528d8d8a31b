// Parameter selection, weight-w index encoding and the server polynomial.

use std::error::Error;

use ldpir::encode::{index_encode, index_rank, select_params, EncodedDatabase, Scheme};
use ldpir::FieldModulus;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = FieldModulus::new(131)?;
    for scheme in [Scheme::Wy, Scheme::G1, Scheme::G2] {
        let (k, b) = if scheme == Scheme::Wy { (6, 0) } else { (6, 3) };
        let params = select_params(1 << 16, 8, k, 1, b, scheme, p)?;
        println!("{scheme}: k={k} b={b} -> w={} m={} (query = {} elements)", params.w, params.m, params.m);
    }

    let params = select_params(1 << 10, 8, 6, 1, 3, Scheme::G1, p)?;
    for i in [1, 2, 3, 500, 1024] {
        let e = index_encode(i, params.m, params.w)?;
        println!("E({i}) has support {e:?}");
        assert_eq!(index_rank(&e), i);
    }

    // F(E(i)) = x_i and the gradient at E(i) is supported near E(i)
    let db = EncodedDatabase::random(params.clone(), 5)?;
    let (value, gradient) = db.eval_and_gradient_raw(&db.indicator(77)?)?;
    let nonzero = gradient.iter().filter(|&&g| g != 0).count();
    println!("F(E(77)) = {value}, x_77 = {}, gradient has {nonzero} nonzero entries", db.record(77)?);
    assert_eq!(value, db.record(77)?.value());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
