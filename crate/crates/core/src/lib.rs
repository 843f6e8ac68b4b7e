//! Union-closed set families over `[n] = {1, …, n}`, `n <= 16`.
//!
//! The crate covers the basis of a family, deletion sequences from the
//! universe `A = 2^[n] - {∅}` down to a union-closed family, the predicates
//! used to steer those sequences, and an auditor that checks a fixed list of
//! claims about them on every small instance.
//!
//! ```
//! use ucsets::{Family, basis};
//!
//! let f = Family::new(3, &[vec![3], vec![1, 2, 3]]).unwrap();
//! assert!(f.is_union_closed().is_closed());
//! assert_eq!(f.complement().len(), 5);
//! assert_eq!(basis(&f), f);
//! ```

pub mod audit;
mod basis;
mod error;
mod family;
mod mask;
pub mod par;
pub mod predicates;
pub mod search;
pub mod sequences;

pub use basis::{basis, decompose, least_split, BasisDecomposition};
pub use error::{Error, Result, MAX_UNIVERSE};
pub use family::{ConjectureVerdict, Family, UnionCheck};
pub use mask::SetMask;
