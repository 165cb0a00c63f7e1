mod common;

use clan_embed::io::*;
use clan_embed::mwu::{build_with_oracle, SingletonOracle};
use clan_embed::*;
use common::*;

#[test]
fn floats_print_with_seventeen_digits() {
    let v = serde_json::json!({"b": num(0.1f64), "a": num(3.0f64), "n": 2});
    assert_eq!(to_json_string(&v), "{\"b\":1.0000000000000001e-1,\"a\":3.0000000000000000e0,\"n\":2}\n");
}

#[test]
fn ultrametric_round_trip() {
    let m = random_metric(20, 4);
    let (u, emb) = clan_embed_ultrametric(&m, &m.points(), &random_ge1(20, 4), &ClanParams::k(2)).unwrap();
    let text = to_json_string(&ultra_value(&u, &emb));
    match parse_embedding::<f64>(&text).unwrap() {
        HostEmbedding::Ultrametric(u2, e2) => assert_eq!((u2, e2), (u.clone(), emb.clone())),
        other => panic!("{other:?}"),
    }
    assert_eq!(to_json_string(&ultra_value(&u, &emb)), text);
}

#[test]
fn tree_round_trip() {
    let g = random_graph(30, 9, 1);
    let (t, emb) = spanning_clan_embed(&g, Mode::K(2)).unwrap();
    let text = to_json_string(&tree_value(&t, &emb));
    match parse_embedding::<f64>(&text).unwrap() {
        HostEmbedding::Tree(t2, e2) => {
            assert_eq!(t2.edges(), t.edges());
            assert_eq!(e2, emb);
            assert_eq!(to_json_string(&tree_value(&t2, &e2)), text);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn distribution_round_trip() {
    let m = random_metric(5, 2);
    let (d, _) = build_with_oracle(&SingletonOracle::new(&m).unwrap(), 0.25, false).unwrap();
    let text = to_json_string(&distribution_value(&d));
    let back = parse_distribution::<f64>(&text).unwrap();
    assert_eq!(back.members.len(), d.params.rounds);
    assert_eq!(to_json_string(&distribution_value(&back)), text);
}

#[test]
fn malformed_json_is_rejected() {
    assert!(matches!(parse_embedding::<f64>("{"), Err(Error::Parse { .. })));
    assert!(parse_embedding::<f64>(r#"{"kind":"graph"}"#).is_err());
    let bad_owner = r#"{"kind":"ultrametric","nodes":[{"id":0,"label":1.0,"parent":null,"owner":null},{"id":1,"label":0.0,"parent":0,"owner":0}],"clans":{"0":[0]},"chief":{"0":0}}"#;
    assert!(parse_embedding::<f64>(bad_owner).is_err());
    assert!(matches!(load_embedding::<f64>("/nonexistent/e.json"), Err(Error::NotFound(_))));
}
