// C ABI surface; populated once the core engine is complete.
