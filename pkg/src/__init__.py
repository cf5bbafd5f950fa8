"""Tree-search MIMO detectors with exact operation counting."""
