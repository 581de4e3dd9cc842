use thiserror::Error;
#[derive(Debug, Error)]
pub enum PicardError {}
pub struct IterationReport;
pub struct LagrangianState;
