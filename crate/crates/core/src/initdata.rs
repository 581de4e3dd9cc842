pub struct InitialData;
pub struct StreamSpec;
