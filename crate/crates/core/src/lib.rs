//! Exact computational machinery for bi-coset graphs and their symmetry
//! certificates.
//!
//! The crate is organized in six layers, each usable on its own:
//!
//! * [`factnum`] — positive integers kept in fully factored form, exact
//!   rationals, and number-theoretic primitives (Legendre valuations,
//!   dominant primes, cyclotomic values, primitive prime divisors, small
//!   Diophantine scans).
//! * [`permcore`] — permutations of `{1..n}`, stabilizer-chain permutation
//!   groups, set partitions, the classical stabilizer subgroups of the
//!   symmetric group, and the two-partition stabilizer with parity analysis.
//! * [`cosetcert`] — intersection matrices, the permutation-equivalence
//!   decision, and replayable double-coset (in)equality certificates.
//! * [`bicoset`] — explicit bi-coset graphs at small index with exact
//!   property checks (regularity, connectivity, edge-transitivity, ...).
//! * [`graphauto`] — an independent desk-scale graph-symmetry oracle:
//!   partition refinement plus backtracking automorphism search.
//! * [`catalog`] — factored orders of simple-group families, Artin
//!   invariants, and the same-order / coincidence scans.
//!
//! Everywhere in the crate group orders are carried as
//! [`factnum::FactoredNat`]; no unfactored big-integer order exists, because
//! all downstream analysis consumes p-parts.

pub mod bicoset;
pub mod catalog;
pub mod cosetcert;
pub mod factnum;
pub mod graphauto;
pub mod permcore;

pub use bicoset::BiCosetGraph;
pub use catalog::{
    artin, coincidence_scan, max_subgroup_orders, same_order_scan, Ambient, ArtinInvariants,
    CoincidenceReport, Family, GroupSpec, MaxSubgroupEntry, MaxSubgroupKind, OrderCollision,
};
pub use cosetcert::{DoubleCosetCertificate, IntersectionMatrix, Verdict};
pub use factnum::{ExactRational, FactoredNat};
pub use graphauto::{Graph, SymmetryReport};
pub use permcore::{PairStabilizerReport, Perm, PermGroup, SetPartition};
