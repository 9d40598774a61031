//! The golden fixture corpus.

use std::path::PathBuf;

use serde_json::{json, Value};

use crate::report::{self, Report};

pub struct Fixture {
    pub name: &'static str,
    pub about: &'static str,
    pub commands: &'static [&'static [&'static str]],
}

const Z: &str = "periodic p=1 pos={0} neg={0}";
const EVENS: &str = "periodic p=2 pos={0} neg={0}";

const FREE_PARTS: &str = "gen fg_xSy(a,a);gen fg_xSy(a,A);gen fg_xSy(a,b);gen fg_xSy(a,B);\
gen fg_xSy(A,a);gen fg_xSy(A,A);gen fg_xSy(A,b);gen fg_xSy(A,B);\
gen fg_xSy(b,a);gen fg_xSy(b,A);gen fg_xSy(b,b);gen fg_xSy(b,B);\
gen fg_xSy(B,a);gen fg_xSy(B,A);gen fg_xSy(B,b);gen fg_xSy(B,B)";

const FREE_UNION: &str =
    "union(union(union(union(gen fg_xSy(a,a);gen fg_xSy(a,A));union(gen fg_xSy(a,b);gen fg_xSy(a,B)));\
union(union(gen fg_xSy(A,a);gen fg_xSy(A,A));union(gen fg_xSy(A,b);gen fg_xSy(A,B))));\
union(union(union(gen fg_xSy(b,a);gen fg_xSy(b,A));union(gen fg_xSy(b,b);gen fg_xSy(b,B)));\
union(union(gen fg_xSy(B,a);gen fg_xSy(B,A));union(gen fg_xSy(B,b);gen fg_xSy(B,B)))))";

pub const CORPUS: &[Fixture] = &[
    Fixture {
        name: "example-psmall",
        about: "{10^n, 10^n + n}: derivation {0}, not weakly P-small, almost P-small",
        commands: &[
            &[
                "delta",
                "--set",
                "gen pow10_plus_n",
                "--mode",
                "window",
                "--window",
                "100000000",
                "--threshold",
                "10",
            ],
            &["delta", "--set", "gen pow10_plus_n", "--mode", "exact"],
            &[
                "classify",
                "--set",
                "gen pow10_plus_n",
                "--props",
                "weakly-p-small,almost-p-small",
                "--n",
                "3",
                "--k",
                "20",
                "--window",
                "1000000",
            ],
        ],
    },
    Fixture {
        name: "example-union",
        about: "{10^n} and the staircase: each derivation is {0}, the union's is Z",
        commands: &[
            &[
                "delta",
                "--set",
                "union(gen pow10;gen pow10_staircase)",
                "--mode",
                "window",
                "--window",
                "100000000",
                "--threshold",
                "4",
                "--region",
                "100",
            ],
            &[
                "delta",
                "--set",
                "union(gen pow10;gen pow10_staircase)",
                "--mode",
                "exact",
            ],
            &["delta", "--set", "gen pow10", "--mode", "exact"],
            &["delta", "--set", "gen pow10_staircase", "--mode", "exact"],
        ],
    },
    Fixture {
        name: "example-freegroup",
        about: "the sixteen sets xSy partition the nontrivial words; aSB is not large",
        commands: &[
            &[
                "partition",
                "--cover-set",
                FREE_UNION,
                "--parts",
                FREE_PARTS,
                "--check-only",
                "--window",
                "6",
            ],
            &["cover", "--set", "gen fg_xSy(a,B)", "--max-size", "2", "--window", "3"],
        ],
    },
    Fixture {
        name: "example-nabla",
        about: "derivations {0} with the odds, then the evens; sparse on the evens but not nabla-thin",
        commands: &[
            &[
                "iterate",
                "--set",
                "gen nabla_example",
                "--steps",
                "3",
                "--mode",
                "handoff",
                "--window",
                "100000000",
                "--threshold",
                "10",
            ],
            &[
                "classify",
                "--set",
                "gen nabla_example",
                "--props",
                "sparse,nabla-thin",
                "--x",
                EVENS,
                "--max-f",
                "2",
                "--window",
                "100000000",
                "--threshold",
                "10",
            ],
        ],
    },
    Fixture {
        name: "partition-bound",
        about: "a periodic partition of Z has a part with a bounded covering of its derivation",
        commands: &[
            &[
                "partition",
                "--cover-set",
                Z,
                "--cover",
                "0",
                "--parts",
                "periodic p=6 pos={0,3} neg={0,3};periodic p=6 pos={1,4} neg={1,4};periodic p=6 pos={2,5} neg={2,5}",
            ],
            &[
                "partition",
                "--cover-set",
                Z,
                "--cover",
                "0",
                "--parts",
                "periodic p=4 pos={0} neg={};diff(periodic p=1 pos={0} neg={0};periodic p=4 pos={0} neg={})",
            ],
        ],
    },
    Fixture {
        name: "builder-pairs",
        about: "greedy pairs for {0, 3, -3, 5, -5} in Z and for a conjugate pair in F(a,b)",
        commands: &[
            &[
                "build-y",
                "--ambient",
                Z,
                "--target",
                "finite {0,3,-3,5,-5}",
                "--steps",
                "60",
                "--window",
                "1000000000",
            ],
            &[
                "build-y",
                "--ambient",
                "gen fg_xSy(a,a)",
                "--target",
                "finite F2 {e,aBA,abA}",
                "--steps",
                "4",
                "--window",
                "8",
            ],
        ],
    },
    Fixture {
        name: "builder-sidon",
        about: "greedy singletons inside the evens have distinct differences",
        commands: &[&[
            "build-y",
            "--ambient",
            EVENS,
            "--target",
            "finite {0}",
            "--steps",
            "30",
            "--window",
            "1000000000",
        ]],
    },
];

pub fn find(name: &str) -> Option<&'static Fixture> {
    CORPUS.iter().find(|f| f.name == name)
}

/// `DELTA_WB_FIXTURES`, or the directory shipped with the crate.
pub fn dir() -> PathBuf {
    std::env::var_os("DELTA_WB_FIXTURES")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures")))
}

pub fn path(f: &Fixture) -> PathBuf {
    dir().join(format!("{}.json", f.name))
}

/// Regenerated document for a fixture.
pub fn regenerate(f: &Fixture, serial: bool) -> Value {
    let reports: Vec<Value> = f
        .commands
        .iter()
        .map(|argv| {
            let mut args: Vec<&str> = vec!["delta-wb"];
            args.extend_from_slice(argv);
            if serial {
                args.push("--serial");
            }
            let (code, rep) = crate::execute_args(&args);
            json!({ "exit": code, "report": rep.to_value() })
        })
        .collect();
    json!({
        "name": f.name,
        "about": f.about,
        "commands": f.commands,
        "reports": reports,
    })
}

pub fn serialize(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("fixtures serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Mismatch(Vec<String>),
    Missing,
    Blessed,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Mismatch(_) => "mismatch",
            Status::Missing => "missing",
            Status::Blessed => "blessed",
        }
    }

    pub fn ok(&self) -> bool {
        matches!(self, Status::Pass | Status::Blessed)
    }
}

/// Regenerates `f` and compares it with the stored copy byte for byte.
pub fn check(f: &Fixture, serial: bool, bless: bool) -> std::io::Result<(Status, Value)> {
    let doc = regenerate(f, serial);
    let text = serialize(&doc);
    let p = path(f);
    if bless {
        std::fs::create_dir_all(dir())?;
        std::fs::write(&p, &text)?;
        return Ok((Status::Blessed, doc));
    }
    let stored = match std::fs::read_to_string(&p) {
        Ok(s) => s,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((Status::Missing, doc)),
        Err(e) => return Err(e),
    };
    if stored == text {
        return Ok((Status::Pass, doc));
    }
    let diffs = match serde_json::from_str::<Value>(&stored) {
        Ok(old) => {
            let d = report::diff(&old, &doc, 20);
            if d.is_empty() {
                vec!["$: formatting differs".to_string()]
            } else {
                d
            }
        }
        Err(e) => vec![format!("$: stored fixture is not valid JSON ({e})")],
    };
    Ok((Status::Mismatch(diffs), doc))
}

pub fn reproduce(args: &crate::cli::ReproduceArgs, serial: bool, r: &mut Report) -> bool {
    if args.list {
        r.result = json!({
            "fixtures": CORPUS.iter().map(|f| json!({ "name": f.name, "about": f.about })).collect::<Vec<_>>(),
        });
        return true;
    }
    r.param("bless", args.bless);
    let selected: Vec<&Fixture> = if args.all {
        CORPUS.iter().collect()
    } else {
        let name = args.name.as_deref().unwrap_or_default();
        match find(name) {
            Some(f) => vec![f],
            None => {
                r.param("name", name);
                r.result = json!({ "error": {
                    "kind": "UnknownFixture",
                    "message": format!("unknown fixture `{name}`; known: {}",
                        CORPUS.iter().map(|f| f.name).collect::<Vec<_>>().join(", ")),
                }});
                return false;
            }
        }
    };
    let mut ok = true;
    let mut rows = Vec::new();
    for f in &selected {
        match check(f, serial, args.bless) {
            Ok((status, doc)) => {
                ok &= status.ok();
                let diff = match &status {
                    Status::Mismatch(d) => d.clone(),
                    _ => Vec::new(),
                };
                let mut row = json!({ "fixture": f.name, "status": status.name(), "diff": diff });
                if !args.all {
                    row["reports"] = doc["reports"].clone();
                }
                rows.push(row);
            }
            Err(e) => {
                ok = false;
                rows.push(json!({ "fixture": f.name, "status": "io-error", "diff": [e.to_string()] }));
            }
        }
    }
    if args.all {
        r.result = json!({ "fixtures": rows });
    } else {
        r.param("name", selected[0].name);
        r.result = rows.pop().unwrap_or(Value::Null);
    }
    ok
}
