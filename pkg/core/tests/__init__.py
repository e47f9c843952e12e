# Testes para o app core