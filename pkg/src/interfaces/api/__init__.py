# API interface implementation
