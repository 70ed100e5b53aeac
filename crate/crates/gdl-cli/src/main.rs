fn main() {
    gdl_cli::run()
}
