# Infrastructure layer unit tests
