use thiserror::Error;
#[derive(Debug, Error)]
pub enum StokesError {}
pub struct LinearStokesData;
pub struct StokesOperator;
pub struct StokesSolution;
