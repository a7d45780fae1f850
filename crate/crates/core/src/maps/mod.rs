//! Sphere maps: components, the quotient `Q_F`, ball automorphisms and the
//! built-in catalog.

mod automorphism;
mod catalog;
mod sphere_map;

pub use automorphism::{compose_target_automorphism, precompose_source_automorphism, BallAutomorphism};
pub use catalog::{catalog, catalog_ids, parse_catalog_id, CatalogEntry, Golden};
pub use sphere_map::{is_sphere_map, MapSource, Quotient, SphereMap};
