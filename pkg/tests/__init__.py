# Test package for nextbit-coder
