//! PASS/FAIL bookkeeping for the verification-style subcommands.
//!
//! Exact checks always run; calibrated checks need a threshold from the
//! fixtures file and are skipped (or, under `--strict`, fail the run) when
//! the key is absent.

use std::process::ExitCode;

use bpden_core::fixtures::Fixtures;
use bpden_core::Error;

pub struct CheckSheet {
    strict: bool,
    failed: bool,
}

impl CheckSheet {
    pub fn new(strict: bool) -> Self {
        CheckSheet {
            strict,
            failed: false,
        }
    }

    pub fn exact(&mut self, name: &str, ok: bool) {
        println!("check {name} = {}", if ok { "PASS" } else { "FAIL" });
        self.failed |= !ok;
    }

    pub fn below(
        &mut self,
        fixtures: &Fixtures,
        key: &str,
        name: &str,
        value: f64,
    ) -> Result<(), Error> {
        if let Some(max) = self.threshold(fixtures, key, name)? {
            let ok = value <= max;
            println!("check {name} = {} ({value} vs max {max})", if ok { "PASS" } else { "FAIL" });
            self.failed |= !ok;
        }
        Ok(())
    }

    pub fn within(
        &mut self,
        fixtures: &Fixtures,
        key_lo: &str,
        key_hi: &str,
        name: &str,
        value: f64,
    ) -> Result<(), Error> {
        let lo = self.threshold(fixtures, key_lo, name)?;
        let hi = self.threshold(fixtures, key_hi, name)?;
        if let (Some(lo), Some(hi)) = (lo, hi) {
            let ok = (lo..=hi).contains(&value);
            println!(
                "check {name} = {} ({value} vs [{lo}, {hi}])",
                if ok { "PASS" } else { "FAIL" }
            );
            self.failed |= !ok;
        }
        Ok(())
    }

    fn threshold(
        &mut self,
        fixtures: &Fixtures,
        key: &str,
        name: &str,
    ) -> Result<Option<f64>, Error> {
        match fixtures.get(key) {
            Some(v) => Ok(Some(v)),
            None if self.strict => Err(Error::usage(format!(
                "fixture '{key}' missing (needed by check {name})"
            ))),
            None => {
                println!("check {name} = SKIP (fixture '{key}' missing)");
                Ok(None)
            }
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        if self.failed {
            println!("status = fail");
            ExitCode::from(1)
        } else {
            println!("status = ok");
            ExitCode::SUCCESS
        }
    }
}
