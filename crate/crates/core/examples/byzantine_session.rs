// A full retrieval against colluding servers that forge a consistent answer.

use std::collections::BTreeSet;
use std::error::Error;

use ldpir::encode::{select_params, EncodedDatabase, Scheme};
use ldpir::protocol::DecodeMode;
use ldpir::sim::{run_session, AdversaryConfig, Knowledge, Strategy};
use ldpir::FieldModulus;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = FieldModulus::new(131)?;
    let params = select_params(1 << 12, 8, 6, 1, 3, Scheme::G1, p)?;
    let db = EncodedDatabase::random(params.clone(), 2024)?;
    let adversary = AdversaryConfig {
        strategy: Strategy::ConsistentFake,
        corrupt_set: BTreeSet::from([2, 4, 6]),
        silent_set: BTreeSet::from([7]),
        knowledge: Knowledge::Omniscient,
        seed: 9,
    };
    let t = run_session(&params, &db, 1234, &adversary, DecodeMode::Optimized, 77)?;

    for s in &t.servers {
        let status = match (s.answer.is_silent(), s.corrupted) {
            (true, _) => "silent",
            (false, true) => "forged",
            (false, false) => "honest",
        };
        println!("server {}: sent {} B, got {} B, {status}", s.server, s.query_bytes.len(), s.answer_bytes.len());
    }
    println!("used servers {:?}", t.responders);
    println!("x_1234 = {}, forged value = {:?}", t.true_value, t.fake_value);
    println!("output list {:?}", t.output.values);
    assert!(t.success);

    let json = t.to_json()?;
    println!("transcript JSON is {} bytes", json.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
