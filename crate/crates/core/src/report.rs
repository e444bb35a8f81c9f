//! Structured run reports with a stable text rendering.

use std::fmt;

/// One named comparison of a measured value against a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub tolerance: f64,
}

/// Fields render in insertion order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub outputs: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn input(&mut self, key: impl Into<String>, value: impl fmt::Display) -> &mut Self {
        self.inputs.push((key.into(), value.to_string()));
        self
    }

    pub fn output(&mut self, key: impl Into<String>, value: impl fmt::Display) -> &mut Self {
        self.outputs.push((key.into(), value.to_string()));
        self
    }

    /// Passes when `measured <= tolerance`.
    pub fn check_at_most(&mut self, name: impl Into<String>, measured: f64, tolerance: f64) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            pass: measured <= tolerance,
            measured,
            tolerance,
        });
        self
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, measured: f64, tolerance: f64) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            pass,
            measured,
            tolerance,
        });
        self
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn output_value(&self, key: &str) -> Option<&str> {
        self.outputs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

fn write_block(f: &mut fmt::Formatter<'_>, title: &str, entries: &[(String, String)]) -> fmt::Result {
    writeln!(f, "{title}:")?;
    for (k, v) in entries {
        if v.contains('\n') {
            writeln!(f, "  {k}: |")?;
            for line in v.lines() {
                writeln!(f, "    {line}")?;
            }
        } else {
            writeln!(f, "  {k}: {v}")?;
        }
    }
    Ok(())
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: {}", self.command)?;
        write_block(f, "inputs", &self.inputs)?;
        write_block(f, "outputs", &self.outputs)?;
        writeln!(f, "checks:")?;
        for c in &self.checks {
            let verdict = if c.pass { "pass" } else { "FAIL" };
            writeln!(
                f,
                "  {}: {verdict} measured={:e} tolerance={:e}",
                c.name, c.measured, c.tolerance
            )?;
        }
        writeln!(f, "status: {}", if self.all_passed() { "pass" } else { "FAIL" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_in_insertion_order() {
        let mut r = RunReport::new("chsh");
        r.input("resource", "pr")
            .output("value", 4.0)
            .output("table", "a\nb")
            .check_at_most("bound", 0.0, 1e-12);
        assert_eq!(
            r.to_string(),
            "command: chsh\ninputs:\n  resource: pr\noutputs:\n  value: 4\n  table: |\n    a\n    b\n\
             checks:\n  bound: pass measured=0e0 tolerance=1e-12\nstatus: pass\n"
        );
    }

    #[test]
    fn failing_check_fails_report() {
        let mut r = RunReport::new("x");
        r.check_at_most("a", 0.5, 0.1);
        assert!(!r.all_passed());
        assert!(r.to_string().ends_with("status: FAIL\n"));
        assert!(RunReport::new("empty").all_passed());
    }
}
