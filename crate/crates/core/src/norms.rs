use thiserror::Error;
#[derive(Debug, Error)]
pub enum NormError {}
pub struct BealeNormConfig;
