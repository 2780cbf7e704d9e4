//! Exact computational toolkit for small finite groups: tables of marks,
//! character tables, global representation tables, and Knutson indices of
//! marked commutative rings.
//!
//! # Worked example: the reduced global table of (D8, ⟨r²⟩)
//!
//! The reduced global representation table of the dihedral group of order 8
//! relative to its center is a 16×16 integer matrix. Its first row is the
//! pair (C2, trivial character), marked against the identity column with
//! value 4, and its last block row is the character table of D8:
//!
//! ```
//! use gtab_core::named::named_group;
//! use gtab_core::subgroup::Subgroup;
//! use gtab_core::globalrep::global_table;
//! use num_bigint::BigInt;
//!
//! let g = named_group("D8").unwrap();
//! let r2 = g.generators()[0].pow(2); // the central rotation r^2
//! let n = Subgroup::generated(&g, &[r2]).unwrap();
//! let t = global_table(&g, &n).unwrap();
//! assert_eq!((t.n_rows(), t.n_cols()), (16, 16));
//! let entries = t.integer_entries().unwrap();
//! // row (C2, trivial): 4 on the identity and the central column
//! assert_eq!(entries[0][0], BigInt::from(4));
//! assert_eq!(entries[0][1], BigInt::from(4));
//! // last row: the two-dimensional irreducible character of D8
//! assert_eq!(entries[15][0], BigInt::from(2));
//! assert_eq!(entries[15][1], BigInt::from(-2));
//! ```

pub mod error;
pub mod perm;
pub mod group;
pub mod named;
pub mod subgroup;
pub mod cyclotomic;
pub mod chartab;
pub mod burnside;
pub mod globalrep;
pub mod hnf;
pub mod knutson;
pub mod canonical;
pub mod corpus;
pub mod verify;
pub mod trace;

pub use error::{Error, Result};
pub use group::{ConjClasses, PermGroup};
pub use perm::Perm;
