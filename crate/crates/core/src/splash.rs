pub struct SplashReport;
pub struct SplashScenario;
