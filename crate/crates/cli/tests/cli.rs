use std::path::PathBuf;
use std::process::Command;

use phimod::base_arith::{FqMatrix, GaloisField, SeriesRing};
use phimod::digits::DigitRational;
use phimod::json;
use phimod::objects::{fl_to_module, FlModule};
use phimod::simples_ext::{ExtContext, ExtDecomposition, PairTerm, SpTerm};
use serde_json::{json, Value};

struct Run {
    code: i32,
    stdout: String,
    envelope: Value,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_phimod")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("UTF-8 output");
    let envelope = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run {
        code: out.status.code().expect("exited normally"),
        stdout,
        envelope,
    }
}

fn write(name: &str, v: &Value) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("phimod-cli");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

fn dr(text: &str) -> DigitRational {
    DigitRational::parse(text, 3).unwrap()
}

#[test]
fn admissible_example() {
    let r = run(&["admissible", "--p", "3", "--r1", "1/2", "--r2", "1", "--s", "1"]);
    assert_eq!(r.code, 0);
    let res = &r.envelope["result"];
    assert_eq!(res["cr"].as_array().unwrap().len(), 1);
    assert_eq!((res["cr"][0]["i"].as_u64(), res["cr"][0]["j"].as_u64()), (Some(0), Some(0)));
    assert_eq!(res["cr"][0]["C"], "1/1");
    assert_eq!(res["sp"], json!([{"i": 0, "j": 0, "bounds_ok": true, "detail": res["sp"][0]["detail"]}]));
    assert_eq!(res["st"], json!([]));
    assert_eq!(r.envelope["command"], "admissible");
    assert_eq!(r.envelope["config"]["resolved"]["s"], 1);
}

#[test]
fn bounds_are_exact_fractions() {
    let r = run(&["bounds", "--p", "3"]);
    assert_eq!(r.code, 0);
    let res = &r.envelope["result"];
    assert_eq!(res["upper_v"], "5/3");
    assert_eq!(res["different"], "8/3");
    // 3^(3 − 1/3), not the 18.96236 sometimes quoted for it.
    assert_eq!(res["disc"], format!("{:.5}", 3f64.powf(8.0 / 3.0)));
    assert_eq!(res["disc"], "18.72075");
}

#[test]
fn simple_reports_character_and_splits() {
    let r = run(&["simple", "--p", "3", "--r", "0/1"]);
    assert_eq!(r.code, 0);
    let res = &r.envelope["result"];
    assert_eq!(res["character"]["etale"], true);
    assert_eq!(res["character"]["exponent"], "0");
    assert_eq!(res["classification"]["etale"], true);
    assert_eq!(res["etale_split"]["sub_rank"], 1);
    let half = run(&["simple", "--p", "3", "--r", "1/4", "--fq-degree", "2", "--prec", "7"]);
    assert_eq!(half.code, 0);
    assert_eq!(half.envelope["result"]["period"], 2);
    assert_eq!(half.envelope["config"]["resolved"]["m"], 2);
    assert_eq!(half.envelope["config"]["resolved"]["prec"], 7);
    assert_eq!(half.envelope["result"]["classification"]["unipotent"], true);
}

#[test]
fn malformed_input_exits_with_two() {
    let unknown = run(&["bounds", "--p", "3", "--frobnicate"]);
    assert_eq!(unknown.code, 2);
    assert_eq!(unknown.envelope["error"]["code"], "usage");
    let missing = run(&["normalize", "/nonexistent/factor.json"]);
    assert_eq!(missing.code, 2);
    assert_eq!(missing.envelope["error"]["code"], "io_error");
    let path = write("not-json.json", &json!(null));
    std::fs::write(&path, "{").unwrap();
    assert_eq!(run(&["decompose", path.to_str().unwrap()]).envelope["error"]["code"], "malformed_input");
    let bad_r = run(&["simple", "--p", "3", "--r", "1/3"]);
    assert_eq!((bad_r.code, bad_r.envelope["error"]["code"].as_str()), (2, Some("not_periodic")));
    let low = run(&["simple", "--p", "3", "--r", "1/2", "--prec", "4"]);
    assert_eq!(low.code, 2);
    assert_eq!(run(&["selftest", "--criterion", "11"]).code, 2);
}

#[test]
fn unsolvable_normalisation_is_a_domain_error() {
    // r₁ = r₂ = 1/2: the violating term cycles and needs β − σ(β) = −1, impossible in F_3.
    let file = json!({"p": 3, "r1": "1/2", "r2": "1/2", "terms": [{"i": 0, "j": 0, "t": 1, "gamma": [1]}]});
    let path = write("cycle.json", &file);
    let small = run(&["normalize", path.to_str().unwrap()]);
    assert_eq!(small.code, 1, "{}", small.stdout);
    assert_eq!(small.envelope["error"]["code"], "field_too_small");
    let big = run(&["normalize", path.to_str().unwrap(), "--fq-degree", "3"]);
    assert_eq!(big.code, 0, "{}", big.stdout);
    assert_eq!(big.envelope["result"]["satisfies_c1"], true);
    assert_eq!(big.envelope["result"]["c2"]["terms"], json!([]));
    assert_eq!(big.envelope["config"]["resolved"]["m"], 3);
}

#[test]
fn decompose_output_reingests_identically() {
    let ctx = ExtContext::new(dr("1/2"), dr("1"), Some(2)).unwrap();
    let ring = SeriesRing::with_default_prec(GaloisField::with_degree(3, 2).unwrap());
    let f = ring.field();
    let dec = ExtDecomposition {
        cr_terms: vec![PairTerm { i: 1, j: 1, gamma: f.element(4) }],
        st_terms: vec![],
        sp_terms: vec![SpTerm { j: 0, gamma: f.element(1) }],
    };
    let (fs, res) = dec.components(&ctx, &ring).unwrap();
    let fs_path = write("ext-factor.json", &json::factor_system_json(&fs, Some(&res)));
    let first = run(&["decompose", fs_path.to_str().unwrap()]);
    assert_eq!(first.code, 0, "{}", first.stdout);
    let result = first.envelope["result"].clone();
    assert_eq!(result, json::decomposition_json(&ctx, &ring, &dec));
    assert_eq!(first.envelope["config"]["resolved"]["input_kind"], "factor_system");

    let dec_path = write("ext-decomposition.json", &result);
    let second = run(&["decompose", dec_path.to_str().unwrap()]);
    assert_eq!(second.code, 0);
    assert_eq!(second.envelope["result"], result);
    assert_eq!(
        serde_json::to_string(&second.envelope["result"]).unwrap(),
        serde_json::to_string(&result).unwrap()
    );

    let mut with_context = json::module_json(&dec.build(&ctx, &ring).unwrap());
    for (k, v) in json::context_json(&ctx).as_object().unwrap() {
        with_context[k] = v.clone();
    }
    let mod_path = write("ext-module.json", &with_context);
    let third = run(&["decompose", mod_path.to_str().unwrap()]);
    assert_eq!(third.code, 0, "{}", third.stdout);
    assert_eq!(third.envelope["result"], result);
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let args = ["selftest", "--criterion", "3", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.envelope["config"]["seed"], 7);
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("phimod-cli-bounds.json");
    let to_file = run(&["bounds", "--p", "5", "--output", path.to_str().unwrap()]);
    assert_eq!(to_file.code, 0);
    assert!(to_file.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["result"]["upper_v"], "9/5");
    assert_eq!(written["config"]["output"], path.to_str().unwrap());
}

#[test]
fn fl_in_both_directions() {
    let f = GaloisField::with_degree(3, 2).unwrap();
    let e = [3u32, 2, 6, 1, 0, 6, 6, 6, 0];
    let phi = FqMatrix::from_rows((0..3).map(|i| (0..3).map(|j| f.element(e[i * 3 + j])).collect()).collect());
    let module = FlModule::new(f.clone(), vec![0, 1, 2], phi).unwrap();
    let fl_path = write("fl.json", &json::fl_json(&module));
    let to = run(&["fl", "to-module", fl_path.to_str().unwrap()]);
    assert_eq!(to.code, 0, "{}", to.stdout);
    let ring = SeriesRing::with_default_prec(f);
    let expected = json::module_json(&fl_to_module(&module, &ring).unwrap());
    assert_eq!(to.envelope["result"]["module"], expected);

    let mod_path = write("fl-module.json", &expected);
    let back = run(&["fl", "from-module", mod_path.to_str().unwrap()]);
    assert_eq!(back.code, 0, "{}", back.stdout);
    let res = &back.envelope["result"];
    assert_eq!(res["fl"]["jumps"], json!([0, 1, 2]));
    assert_eq!(res["extension_degree"], 3);
    assert_eq!(res["witness"]["field"]["m"], 6);

    let simple = write("simple-module.json", &json::module_json(&phimod::simples_ext::build_simple(&ring, &dr("1/4")).unwrap()));
    let plain = run(&["fl", "from-module", simple.to_str().unwrap()]);
    assert_eq!(plain.envelope["result"]["extension_degree"], 1);
    assert_eq!(plain.envelope["result"]["fl"]["jumps"], json!([0, 2]));
}

#[test]
fn object_actions() {
    let ring = SeriesRing::with_default_prec(GaloisField::prime(3).unwrap());
    let l = phimod::simples_ext::build_simple(&ring, &dr("1/2")).unwrap();
    let module = json::module_json(&l);
    let path = write("half.json", &module);
    let valid = run(&["object", "validate", path.to_str().unwrap()]);
    assert_eq!(valid.code, 0);
    assert_eq!(valid.envelope["result"]["valid"], true);
    assert_eq!(valid.envelope["result"]["crystalline"], true);

    let mut broken = module.clone();
    broken["n_table"] = json!([[[0, 0, 0, 0, 0, 0, 1]]]);
    let bpath = write("broken.json", &broken);
    let report = run(&["object", "validate", bpath.to_str().unwrap()]);
    assert_eq!(report.code, 0, "{}", report.stdout);
    assert_eq!(report.envelope["result"]["valid"], false);
    assert_eq!(report.envelope["result"]["failures"][0]["axiom"], "n-truncation");

    let splits = run(&["object", "splits", path.to_str().unwrap()]);
    assert_eq!(splits.code, 0, "{}", splits.stdout);
    assert_eq!(splits.envelope["result"]["classification"]["unipotent"], true);
    assert_eq!(splits.envelope["result"]["unipotent_split"]["sub_rank"], 1);

    let identity = write("id.json", &json!({"source": module, "target": module, "matrix": [[[1]]]}));
    let k = run(&["object", "kernel", identity.to_str().unwrap()]);
    assert_eq!(k.code, 0, "{}", k.stdout);
    assert_eq!(k.envelope["result"]["object"]["rank"], 0);
    assert_eq!(k.envelope["result"]["strict_mono"], true);
    let zero = write("zero.json", &json!({"source": module, "target": module, "matrix": [[[]]]}));
    let c = run(&["object", "cokernel", zero.to_str().unwrap()]);
    assert_eq!(c.code, 0, "{}", c.stdout);
    assert_eq!(c.envelope["result"]["object"]["rank"], 1);
    let scalar = write("scalar.json", &json!({"source": module, "target": module, "matrix": [[[2]]]}));
    let ok_scalar = run(&["object", "kernel", scalar.to_str().unwrap()]);
    assert_eq!(ok_scalar.code, 0);
    let twisted = write("twist.json", &json!({"source": module, "target": module, "matrix": [[[0, 1]]]}));
    let bad = run(&["object", "kernel", twisted.to_str().unwrap()]);
    assert_eq!((bad.code, bad.envelope["error"]["code"].as_str()), (1, Some("invalid_morphism")));
}

#[test]
fn filtrate_the_traced_instance() {
    let path = write("units.json", &json!({"minpoly": ["0", "1"], "units": [["4"], ["10"]], "p": 3}));
    let r = run(&["filtrate", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let res = &r.envelope["result"];
    assert_eq!(res["af"], json!([1, 2]));
    assert_eq!(res["basis"], json!([["4/1"], ["10/1"]]));
    assert_eq!(res["transcript"], json!([]));
    assert_eq!(res["replay_matches"], true);
    let empty = write("no-units.json", &json!({"minpoly": ["0", "1"], "units": [], "p": 3}));
    let e = run(&["filtrate", empty.to_str().unwrap()]);
    assert_eq!((e.code, e.envelope["error"]["code"].as_str()), (1, Some("empty_units")));
}
