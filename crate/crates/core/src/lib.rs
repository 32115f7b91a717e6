//! Finite matrix groups over small finite fields: representation construction,
//! orbit enumeration on the underlying vector space, orbital-graph diameters via
//! additive-Cayley BFS, and closed-form diameter bounds with a results registry.

pub mod bounds;
pub mod cache;
pub mod descriptor;
pub mod gf;
pub mod linalg;
pub mod orbgraph;
pub mod orbits;
pub mod repfactory;
pub mod report;
pub mod scenario;
