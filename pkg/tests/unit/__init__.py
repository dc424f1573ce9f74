# Unit tests package initialization
