//! Finite doctrines and the modal operators induced by adjunctions and comonads between them.
//!
//! Every structure here is finite and every law is checked by exhaustive enumeration.

pub mod adjunction;
pub mod bundled;
pub mod comonad;
pub mod doctrine;
mod enumerate;
pub mod error;
pub mod fincat;
pub mod instances;
pub mod interior;
pub mod order;
pub mod suite;
pub mod temporal;

pub use error::{Error, Result, Violation, Violations};
pub use adjunction::{AdjMorphism, AdjTwoCell, DoctrineAdjunction, ModalArrow};
pub use comonad::{CmdMorphism, DoctrineComonad, EmBundle};
pub use doctrine::{Doctrine, OneArrow, TwoArrow};
pub use fincat::{FinCategory, Functor, NatTransformation};
pub use interior::InteriorOp;
pub use order::{FinLattice, FinPoset, MonotoneMap};
pub use suite::{run_suite, SuiteReport};
pub use temporal::{BranchLift, CoalgebraKind, FCoalgebra};
