use serde_json::{json, Value};

/// Provenance written into every output: tool version, the parsed command
/// line and the seed that drove any randomness.
#[derive(Debug, Clone)]
pub struct Meta {
    pub command: &'static str,
    pub config: Value,
    pub seed: Option<u64>,
}

impl Meta {
    pub fn json(&self) -> Value {
        json!({
            "tool": "cloudskel",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
        })
    }

    /// Comment lines for CSV outputs, without the leading `#`.
    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("cloudskel {} {}", env!("CARGO_PKG_VERSION"), self.command),
            format!("config: {}", self.config),
            format!("seed: {}", self.seed.map_or("none".into(), |s| s.to_string())),
        ]
    }

    pub fn with(&self, extra: Value) -> Value {
        let mut v = self.json();
        if let (Some(obj), Value::Object(extra)) = (v.as_object_mut(), extra) {
            obj.extend(extra);
        }
        v
    }
}

/// A fresh seed for runs that were not given one; reported on stderr so the
/// run can be repeated.
pub fn draw_seed() -> u64 {
    let seed = rand::random();
    eprintln!("seed: {seed}");
    seed
}
