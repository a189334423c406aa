use std::fs;

use puncture_metric::rational::parse_rational;
use puncture_metric::{
    gamma3_covering, lambda_covering, solve_covering_coefficients, CoveringData, Level, Rational,
};

use crate::args::{BuiltIn, SourceArgs};
use crate::CliError;

pub fn built_in(which: BuiltIn, order: usize) -> Result<CoveringData, CliError> {
    Ok(match which {
        BuiltIn::Lambda => lambda_covering(order)?,
        BuiltIn::Gamma3 => gamma3_covering(order)?,
    })
}

pub fn rational(flag: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

impl SourceArgs {
    pub fn is_given(&self) -> bool {
        self.example.is_some()
            || self.coeffs_file.is_some()
            || self.level.is_some()
            || self.c.is_some()
    }

    /// Loads or computes the covering data. Files are checked algebraically.
    pub fn load(&self) -> Result<CoveringData, CliError> {
        self.load_with(true)
    }

    /// As `load`, but a file is only checked for shape.
    pub fn load_unchecked(&self) -> Result<CoveringData, CliError> {
        self.load_with(false)
    }

    fn load_with(&self, check: bool) -> Result<CoveringData, CliError> {
        if self.order == 0 {
            return Err(CliError::Usage("--order must be at least 1".into()));
        }
        if let Some(which) = self.example {
            return built_in(which, self.order);
        }
        if let Some(path) = &self.coeffs_file {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let data = CoveringData::from_json(&text)?;
            if check {
                data.validate()?;
            }
            return Ok(data);
        }
        if let Some(level) = self.level {
            let c1 = rational("c1", self.c1.as_deref().unwrap_or_default())?;
            let c2 = rational("c2", self.c2.as_deref().unwrap_or_default())?;
            return Ok(solve_covering_coefficients(level, c1, c2, self.order)?);
        }
        if let Some(c) = &self.c {
            let c = c
                .iter()
                .map(|s| rational("c", s))
                .collect::<Result<Vec<_>, _>>()?;
            let k = rational("scale-k", &self.scale_k)?;
            return Ok(CoveringData::from_coefficients(Level::UserSupplied, k, c)?);
        }
        Err(CliError::Usage(
            "no covering data: give --example, --coeffs-file, --N with --c1 and --c2, or --c"
                .into(),
        ))
    }
}
