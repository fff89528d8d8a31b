// Decoding by overinterpolation when half the samples are adversarial.

use std::error::Error;

use ldpir::protocol::{reconstruct_g1, DecodeMode};
use ldpir::{FieldModulus, HermiteSample, Polynomial};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = FieldModulus::new(131)?;
    let honest = Polynomial::new(m, vec![42, 9, 1]);
    let fake = Polynomial::new(m, vec![7, 100, 3]);
    // three honest samples, three from a consistent fake
    let tuples: Vec<HermiteSample> = (1..=6u64)
        .map(|x| {
            let f = if x <= 3 { &honest } else { &fake };
            HermiteSample::from_raw(m, x, f.eval_raw(x), f.derivative().eval_raw(x))
        })
        .collect();

    for mode in [DecodeMode::Naive, DecodeMode::Optimized] {
        let list = reconstruct_g1(&tuples, 2, 3, mode)?;
        println!("{mode:?}: values {:?}", list.values);
        for c in &list.candidates {
            println!("    candidate {c:?}");
        }
        assert!(list.contains(m.elem(42)));
        assert_eq!(list.len(), 2);
    }

    // with b = 2 only the majority polynomial survives
    let mut tuples = tuples;
    tuples[3] = HermiteSample::from_raw(m, 4, honest.eval_raw(4), honest.derivative().eval_raw(4));
    let list = reconstruct_g1(&tuples, 2, 2, DecodeMode::Optimized)?;
    println!("one fewer fake sample, b = 2: {:?}", list.values);
    assert_eq!(list.len(), 1);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
