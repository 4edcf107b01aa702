"""Graph model, extractor algebra, schemes, learning and execution."""
