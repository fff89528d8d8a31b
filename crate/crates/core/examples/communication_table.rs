// Per-server communication as k, b, t and the field width vary.

use std::error::Error;

use ldpir::cli::{cmd_bench_comm, BenchGrid};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grid = BenchGrid::default_table();
    println!("n = 2^{}", grid.n.trailing_zeros());
    println!("{:<6}{:>4}{:>4}{:>3}{:>6}{:>5}{:>10}{:>8}{:>14}", "scheme", "k", "b", "t", "bits", "w", "m", "n^", "bytes/server");
    for r in cmd_bench_comm(&grid)? {
        match (r.w, r.m, &r.exponent, r.formula_bytes_per_server) {
            (Some(w), Some(m), Some(e), Some(bytes)) => println!(
                "{:<6}{:>4}{:>4}{:>3}{:>6}{:>5}{:>10}{:>8}{:>14}",
                r.scheme.to_string(), r.k, r.b, r.t, r.bit_width, w, m, e, bytes
            ),
            _ => println!("{:<6}{:>4}{:>4}{:>3}{:>6}  infeasible: {}", r.scheme.to_string(), r.k, r.b, r.t, r.bit_width, r.note),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
