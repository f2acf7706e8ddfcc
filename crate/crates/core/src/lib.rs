//! Exact combinatorics of partition rearrangements whose prefix sums avoid
//! a modulus.
//!
//! A composition is *q'-cumulative* when none of its partial sums is divisible
//! by `q`. For a partition `λ` this crate
//!
//! * enumerates the q'-cumulative rearrangements of `λ` by brute force
//!   ([`enumerate`]),
//! * counts them exactly through a residue-class dynamic program and a
//!   multinomial product ([`count`]),
//! * decides whether any exist for prime moduli without counting, and builds
//!   an explicit witness when they do ([`decide`]).
//!
//! The brute-force side is kept deliberately naive so that it can serve as the
//! oracle for the other two.

pub mod cli;
pub mod composition;
pub mod count;
pub mod decide;
pub mod enumerate;
mod error;

pub use composition::{mod_inverse, BigCount, Composition, Partition, ResidueProfile};
pub use count::{binomial, c_count, factorial, w_count, SharedWCountTable, WCountTable};
pub use decide::{
    is_prime, lemma1_nonempty, remark_sufficient, theorem1_nonzero, witness, witness_pattern,
    ExistenceVerdict, MaximizerCheck, WitnessMethod, WitnessReport,
};
pub use enumerate::{
    brute_c, brute_w, brute_w_count, brute_w_for_each, cumulative_rearrangements, partitions_of, rearrangements, PartitionStream,
    Rearrangements,
};
pub use error::{Error, Result};
