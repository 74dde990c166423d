//! Exact tools for generalised right-angled Artin pro-p groups (p-RAAGs):
//! predicted F_p-cohomology, mildness at finite depth, triangle Lie lattice
//! classification, amalgam and HNN assembly, and Golod-Shafarevich
//! certificates.

pub mod arith;
pub mod assembler;
pub mod gocha;
pub mod graph;
pub mod lie;
pub mod presentation;
pub mod quadalg;
pub mod report;
