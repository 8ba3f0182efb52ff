# Test package for the retail RL sandbox
