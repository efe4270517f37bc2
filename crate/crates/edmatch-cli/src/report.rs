//! Match reports: stable JSON and a readable text rendering.

use std::collections::BTreeMap;

use edmatch::{EditOp, EditScript, Pattern, Substitution};
use serde::Serialize;

#[derive(Serialize)]
#[serde(untagged)]
pub enum Distance {
    Value(usize),
    Marker(&'static str),
}

#[derive(Serialize)]
pub struct ScriptOp {
    pub op: &'static str,
    pub pos: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sym: Option<String>,
}

#[derive(Serialize, Default)]
pub struct Timings {
    pub parse_s: f64,
    pub solve_s: f64,
    pub total_s: f64,
}

#[derive(Serialize)]
pub struct MatchReport {
    pub algo: &'static str,
    pub pattern_class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<usize>,
    pub distance: Distance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_delta: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub substitution: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub script: Option<Vec<ScriptOp>>,
    pub timings: Timings,
}

impl MatchReport {
    pub fn print(&self, json: bool) {
        if json {
            println!("{}", serde_json::to_string_pretty(self).expect("report serializes"));
        } else {
            self.print_text();
        }
    }

    fn print_text(&self) {
        println!("class: {}", self.pattern_class);
        println!("algo: {}", self.algo);
        match &self.distance {
            Distance::Value(d) => println!("distance: {d}"),
            Distance::Marker(m) => println!("distance: {m}"),
        }
        if let (Some(delta), Some(within)) = (self.delta, self.within_delta) {
            println!("within delta {delta}: {within}");
        }
        if let Some(sub) = &self.substitution {
            for (name, image) in sub {
                println!("{name} = {image:?}");
            }
        }
        if let Some(script) = &self.script {
            let rendered: Vec<String> = script
                .iter()
                .map(|op| match &op.sym {
                    Some(s) => format!("{}{}:{}", op.op, op.pos, s),
                    None => format!("{}{}", op.op, op.pos),
                })
                .collect();
            println!("script: {}", rendered.join(" "));
        }
        println!("time: {:.6}s", self.timings.total_s);
    }
}

pub fn substitution_map(p: &Pattern, h: &Substitution) -> BTreeMap<String, String> {
    h.iter()
        .map(|(x, image)| (p.var_name(x).to_string(), image.to_text()))
        .collect()
}

pub fn script_ops(script: &EditScript) -> Vec<ScriptOp> {
    script
        .ops()
        .iter()
        .map(|op| match *op {
            EditOp::Keep { pos } => ScriptOp {
                op: "K",
                pos,
                sym: None,
            },
            EditOp::Delete { pos } => ScriptOp {
                op: "D",
                pos,
                sym: None,
            },
            EditOp::Substitute { pos, sym } => ScriptOp {
                op: "S",
                pos,
                sym: Some(sym.to_char().to_string()),
            },
            EditOp::Insert { pos, sym } => ScriptOp {
                op: "I",
                pos,
                sym: Some(sym.to_char().to_string()),
            },
        })
        .collect()
}
