# Source package initialization
