//! List-decodable Byzantine-robust multi-server private information retrieval.
//!
//! A client fetches record `x_i` from `ℓ` servers that each hold the whole
//! database. Queries are Shamir shares of a weight-`w` encoding of `i`, so
//! any `t` servers learn nothing. Each server returns `F(q)` and `∇F(q)`,
//! which gives the client an order-1 sample of a polynomial `f` of degree
//! `w·t` with `f(0) = x_i`. From any `k` answers, up to `b` of them wrong,
//! the client decodes a short list of candidates guaranteed to contain `x_i`.
//!
//! Two list decoders are provided:
//!
//! * [`protocol::reconstruct_g1`] interpolates subsets of the samples and
//!   keeps low-degree results that agree with enough samples.
//! * [`protocol::reconstruct_g2`] builds a bivariate polynomial of bounded
//!   weighted degree vanishing to order two on every sample and reads the
//!   candidates off its roots.
//!
//! [`protocol::reconstruct_wy`] is the unique-decoding baseline for `b = 0`.
//!
//! ```
//! use ldpir::encode::{select_params, EncodedDatabase, Scheme};
//! use ldpir::field::FieldModulus;
//! use ldpir::protocol::{answer, derive_tuples, query_gen, reconstruct, DecodeMode};
//!
//! let p = FieldModulus::new(131)?;
//! let params = select_params(1 << 10, 8, 6, 1, 3, Scheme::G1, p)?;
//! let db = EncodedDatabase::random(params.clone(), 7)?;
//! let (queries, aux) = query_gen(&params, 42, 1)?;
//! let answers = queries.iter().map(|q| answer(&db, q)).collect::<Result<Vec<_>, _>>()?;
//! let (_, tuples) = derive_tuples(&aux, params.k, &answers)?;
//! let list = reconstruct(&params, &tuples, DecodeMode::Optimized)?;
//! assert!(list.contains(db.record(42)?));
//! # Ok::<(), ldpir::error::Error>(())
//! ```
//!
//! The [`sim`] module runs whole sessions against adversarial servers and
//! accounts for every byte on the wire; [`oracle`] holds exhaustive
//! references used by the tests; [`cli`] backs the `ldpir` binary.

pub mod cli;
pub mod encode;
pub mod error;
pub mod field;
pub mod listdecode;
pub mod oracle;
pub mod poly;
pub mod protocol;
pub mod sim;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldModulus};
pub use poly::{HermiteSample, Polynomial};
