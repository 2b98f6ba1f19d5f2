use cubefold::enumerate::verify_counts;

fn main() {
    let report = verify_counts();
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
}
