//! Linearizations of constituency trees, dependency trees and dependency
//! graphs as per-token label sequences, with the numeric kernels of diffusion
//! and adversarial taggers and the usual parsing metrics.
//!
//! ```
//! use structlabel::codec::{decode, encode, Scheme, Structure};
//! use structlabel::dep::{DepStructure, Sentence};
//!
//! let s = Sentence::from_forms("1", &["I", "went"]);
//! let tree = DepStructure::from_heads(s.clone(), &[2, 0], &["nsubj", "root"]);
//! let enc = encode(Scheme::Dep4Bit, &s, &Structure::Dependency(tree.clone())).unwrap();
//! assert_eq!(enc.labels.labels, ["0100@nsubj", "1110@root"]);
//! let dec = decode(Scheme::Dep4Bit, &s, &enc.labels.labels).unwrap();
//! assert_eq!(dec.structure, Structure::Dependency(tree));
//! ```

pub mod codec;
pub mod constituency;
pub mod dep;
pub mod error;
pub mod io;
pub mod kernels;
pub mod metrics;
pub mod planes;

pub use error::{Error, Result};
