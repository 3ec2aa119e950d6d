use serde::Serialize;
use serde_json::Value;

use arrcoh::Check;

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub input_fingerprint: String,
    pub result: Value,
    pub checks: Vec<Check>,
    pub text: Vec<String>,
}

#[derive(Serialize)]
struct MachineCheck<'a> {
    name: &'a str,
    status: &'static str,
    detail: &'a str,
}

#[derive(Serialize)]
struct Machine<'a> {
    command: &'a str,
    input_fingerprint: &'a str,
    result: &'a Value,
    checks: Vec<MachineCheck<'a>>,
}

fn status(c: &Check) -> &'static str {
    if c.passed {
        "PASS"
    } else {
        "FAIL"
    }
}

impl Report {
    pub fn passed(&self) -> bool {
        arrcoh::check::all_passed(&self.checks)
    }

    pub fn machine(&self) -> String {
        let doc = Machine {
            command: &self.command,
            input_fingerprint: &self.input_fingerprint,
            result: &self.result,
            checks: self
                .checks
                .iter()
                .map(|c| MachineCheck {
                    name: &c.name,
                    status: status(c),
                    detail: &c.detail,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn human(&self) -> String {
        let mut out = format!("{} [{}]\n", self.command, &self.input_fingerprint[..12]);
        for line in &self.text {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
        for c in &self.checks {
            out.push_str(&format!("{} {}", status(c), c.name));
            if !c.detail.is_empty() {
                out.push_str(&format!(": {}", c.detail));
            }
            out.push('\n');
        }
        out
    }
}
