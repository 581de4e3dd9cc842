use thiserror::Error;
#[derive(Debug, Error)]
pub enum MeshError {}
pub struct ReferenceMesh;
pub struct DiscreteField;
pub enum FeSpace {}
