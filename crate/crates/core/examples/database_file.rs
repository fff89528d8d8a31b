// Writing a database file, loading it and sweeping list sizes over it.

use std::error::Error;

use ldpir::cli::{cmd_gen_db, cmd_simulate, ExperimentConfig};
use ldpir::encode::{read_database_file, Scheme};
use ldpir::sim::{AdversarySpec, Knowledge, Strategy};
use ldpir::FieldModulus;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join(format!("ldpir-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("records.db");
    cmd_gen_db(1 << 12, 1031, 3, &path)?;
    let (p, records) = read_database_file(&path)?;
    println!("{} holds {} records over {p}, {} bytes", path.display(), records.len(), std::fs::metadata(&path)?.len());

    let config = ExperimentConfig {
        scheme: Scheme::G2,
        n: 1 << 12,
        p: FieldModulus::new(1031)?,
        trials: 200,
        adversary: AdversarySpec {
            strategy: Strategy::ConsistentFake,
            knowledge: Knowledge::Omniscient,
            seed: 1,
        },
        db_path: Some(path),
        ..Default::default()
    };
    println!("config:\n{}", config.to_json());
    let report = cmd_simulate(&config)?;
    let s = &report.summary;
    println!("w={} m={}: {}/{} retrievals kept the record, list sizes {:?}", report.w, report.m, s.successes, s.trials, s.list_size_histogram);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
