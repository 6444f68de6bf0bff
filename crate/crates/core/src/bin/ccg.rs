fn main() {
    // populated alongside the cli module
}
