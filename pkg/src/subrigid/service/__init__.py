"""HTTP service and command dispatch around the core package."""
